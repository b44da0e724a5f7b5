#pragma once

#include <string>

#include "penrose/corrector.hpp"
#include "penrose/stats.hpp"
#include "penrose/walk.hpp"

namespace penrose {

/// {"gamma":[5 reals],"torus":[i,j],"seed":u64}; seed round-trips exactly,
/// reals to full double precision.
std::string grid_params_to_json(const GridParams& params);
GridParams grid_params_from_json(const std::string& text);

/// {"params":{...},"radius":r,"tiles":[{"ij":[i,j],"pq":[p,q],"K":[5 ints]},...]}.
/// Centers and shapes are derived data: the loader re-runs the dual map's
/// center formula and the nearest-to-origin recentring.
std::string patch_to_json(const Patch& patch);
Patch patch_from_json(const std::string& text);

/// CSV: id,center_x,center_y,shape,rotation_class,interior
std::string vertex_table_csv(const PenroseGraph& g, const Patch& patch);
/// CSV: vertex_id_a,vertex_id_b,step_x,step_y  (a < b)
std::string edge_list_csv(const PenroseGraph& g);
/// CSV: vertex_id,chi_x,chi_y
std::string corrector_csv(const CorrectorField& c);
/// CSV: n,max_ratio
std::string profile_max_csv(const SublinearityProfile& p);
/// CSV: k,ribbon_ratio_a,ribbon_ratio_b
std::string profile_ribbon_csv(const SublinearityProfile& p);
/// CSV: k,vertex_id,x,y
std::string walk_csv(const WalkPath& w, const PenroseGraph& g);

std::string batch_summary_json(const BatchSummary& summary);

/// Report bundle: {"reports":[...],"summary":{"passed":..,"failed":..},...}.
/// Deterministic byte-for-byte for fixed inputs: no timestamps inside.
std::string reports_to_json(std::span<const TestReport> reports, const std::string& command,
                            const std::string& reproduce);

enum class ColorBy : uint8_t { Shape, Class, Chi };

/// Deterministic SVG rendering of a patch; tiles in key order, fixed
/// 6-decimal coordinates. chi coloring uses a linear ramp on |chi|.
std::string render_svg(const Patch& patch, ColorBy color_by, const CorrectorField* chi = nullptr);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace penrose
