#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hjvisc/graphdist.hpp"
#include "hjvisc/perron.hpp"
#include "hjvisc/pwfn.hpp"
#include "hjvisc/viscosity.hpp"

namespace hjvisc::io {

using Json = nlohmann::ordered_json;

/// Malformed or incomplete input. `where` is a JSON pointer or "byte N".
class InputError : public std::runtime_error {
public:
    InputError(std::string where, const std::string& msg)
        : std::runtime_error(where.empty() ? msg : where + ": " + msg), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

/// Parses JSON text; syntax errors become InputError with the byte offset.
Json parse_json(const std::string& text, const std::string& source = "");
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// `[lo, hi]` or a bare number.
Json to_json(const Interval& v);
Interval interval_from_json(const Json& j, const std::string& where);

/// {"domain": [a, b], "breakpoints": [...], "pieces": [{"lower": [α, β], "upper": [γ, δ]}], "nodes": [...]}
/// On input, "breakpoints" may list interior points only or the full list
/// starting at a; "upper" defaults to "lower"; "breakpoints" and "nodes" may be
/// omitted for a single piece. Output always writes the full breakpoint list.
Json to_json(const PiecewiseFn& f);
PiecewiseFn pwfn_from_json(const Json& j, const std::string& where);

Json to_json(const SlopeSet& s);
Json to_json(const VerificationReport& r);
Json to_json(const HContinuity& h);
Json to_json(const GridFn& g);
Json to_json(const TraceRecord& r);
Json to_json(const SolveTrace& t, bool with_snapshots);
GridFn grid_from_json(const Json& j, const std::string& where);

struct LabelledGraph {
    std::string label;
    GraphSet graph;
};

/// CSV rows `function,kind,x0,y0,x1,y1,y0_upper,y1_upper`; bands fill the last two columns.
std::string graph_csv(std::span<const LabelledGraph> graphs);
/// CSV rows `x,lower,upper`.
std::string grid_csv(const GridFn& g);
/// CSV rows `x,lower,upper` at breakpoints (limits from both sides) and piece midpoints.
std::string function_csv(const PiecewiseFn& f);

struct PlotLayer {
    std::string label;
    PiecewiseFn f;
};

/// Lower and upper bounds as polylines, proper-interval pieces as shaded
/// bands, interval node values as shaded vertical bars. Grid iterates are
/// drawn on top with increasing opacity, the last one solid.
std::string svg_plot(std::span<const PlotLayer> layers, std::span<const GridFn> iterates = {});

}  // namespace hjvisc::io
