#include "lhp/problems.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace lhp {

namespace {

constexpr double kPi = std::numbers::pi;

ProblemSpec single_material(std::string name, RootGrid grid, Diffusion A = {}, double V = 0.0) {
  ProblemSpec s;
  s.name = std::move(name);
  s.subdomains = {{A, V}};
  s.root_subdomain.assign(grid.active.size(), -1);
  for (std::size_t c = 0; c < grid.active.size(); ++c)
    if (grid.active[c]) s.root_subdomain[c] = 0;
  s.grid = std::move(grid);
  return s;
}

CatalogEntry finish(ProblemSpec spec, ReferenceData ref, int suggested_M) {
  spec.validate();
  Mesh mesh = spec.initial_mesh();
  return {std::move(spec), std::move(mesh), std::move(ref), suggested_M};
}

CatalogEntry unit_square() {
  ProblemSpec s = single_material("unit_square", RootGrid::rectangle(0, 0, 1, 1, 8, 8));
  return finish(std::move(s), {rectangle_spectrum(1.0, 1.0, 400)}, 20);
}

CatalogEntry lshape() {
  const Box hole{0.0, 0.0, 1.0, 1.0};
  ProblemSpec s = single_material("lshape", masked_grid(-1, -1, 1, 1, 8, 8, std::span(&hole, 1)));
  ReferenceData ref;
  const double low[] = {9.639723844, 15.19725193, 19.73920880, 29.52148111, 31.91263596};
  for (int i = 0; i < 5; ++i) ref.values.push_back({i + 1, low[i], ""});
  const double cluster[] = {485.71752463708, 490.15998172598, 493.48022005447, 493.48022005447,
                            493.48022005447, 499.24106145290, 502.30119419396};
  for (int i = 0; i < 7; ++i) ref.values.push_back({101 + i, cluster[i], ""});
  return finish(std::move(s), std::move(ref), 5);
}

CatalogEntry schrodinger_rough(std::uint64_t seed) {
  ProblemSpec s;
  s.name = "schrodinger_rough";
  s.seed = seed;
  s.grid = RootGrid::rectangle(0, 0, 1, 1, 20, 20);
  std::mt19937_64 rng(seed);
  for (int c = 0; c < 400; ++c) {
    s.subdomains.push_back({Diffusion{}, 8000.0 * uniform01(rng())});
    s.root_subdomain.push_back(c);
  }
  s.note = "V piecewise constant on the 20x20 grid, iid uniform on [0, 8000] from the seed";
  return finish(std::move(s), {}, 20);
}

CatalogEntry schrodinger_simple(std::uint64_t seed) {
  ProblemSpec s;
  s.name = "schrodinger_simple";
  s.seed = seed;
  s.grid = RootGrid::rectangle(0, 0, 1, 1, 8, 8);
  std::mt19937_64 rng(seed);
  for (int b = 0; b < 16; ++b) s.subdomains.push_back({Diffusion{}, 6400.0 * uniform01(rng())});
  s.root_subdomain.resize(64);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) s.root_subdomain[i + 8 * j] = (i / 2) + 4 * (j / 2);
  s.note = "seeded stand-in potential: 4x4 blocks with values uniform on [0, 6400]; not the exact published layout";
  return finish(std::move(s), {}, 20);
}

CatalogEntry disc_diffusion(const std::string& name, int corner_cells, int n) {
  ProblemSpec s;
  s.name = name;
  s.grid = RootGrid::rectangle(0, 0, 1, 1, n, n);
  s.subdomains = {{Diffusion::isotropic(1.0), 0.0}, {Diffusion::isotropic(10.0), 0.0}};
  s.root_subdomain.resize(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const bool low = i < corner_cells && j < corner_cells;
      const bool high = i >= corner_cells && j >= corner_cells;
      s.root_subdomain[i + n * j] = (low || high) ? 0 : 1;
    }
  s.note = "A = 1 on the lower-left and upper-right blocks, 10 elsewhere; singular exponent (4/pi) arccot(sqrt 10) = " +
           std::to_string(4.0 / kPi * std::atan(1.0 / std::sqrt(10.0)));
  return finish(std::move(s), {}, 50);
}

CatalogEntry perforated(int m) {
  if (m < 1) throw UnknownProblem("perforated: m must be >= 1");
  const int n = 2 * m + 1;
  const double H = 1.0 / n;
  std::vector<Box> holes;
  for (int j = 2; j <= n; j += 2)
    for (int i = 2; i <= n; i += 2) holes.push_back({(i - 1) * H, (j - 1) * H, i * H, j * H});
  ProblemSpec s = single_material("perforated:" + std::to_string(m), masked_grid(0, 0, 1, 1, n, n, holes));
  ReferenceData ref;
  const double lam = 2.0 * (kPi / H) * (kPi / H);
  ref.values.push_back({m == 3 ? 41 : -1, lam, "sin(pi x/H) sin(pi y/H)"});
  return finish(std::move(s), std::move(ref), 50);
}

}  // namespace

std::optional<double> ReferenceData::at(int index) const {
  for (const auto& v : values)
    if (v.index == index) return v.value;
  return std::nullopt;
}

double uniform01(std::uint64_t draw) { return static_cast<double>(draw >> 11) * 0x1.0p-53; }

std::vector<ReferenceValue> rectangle_spectrum(double a, double b, int count) {
  std::vector<std::pair<double, std::pair<int, int>>> vals;
  const int lim = static_cast<int>(std::ceil(std::sqrt(4.0 * count))) + 4;
  for (int i = 1; i <= lim; ++i)
    for (int j = 1; j <= lim; ++j) vals.push_back({std::pow(i * kPi / a, 2) + std::pow(j * kPi / b, 2), {i, j}});
  std::sort(vals.begin(), vals.end());
  std::vector<ReferenceValue> out;
  for (int k = 0; k < count && k < static_cast<int>(vals.size()); ++k)
    out.push_back({k + 1, vals[k].first,
                   "(" + std::to_string(vals[k].second.first) + "," + std::to_string(vals[k].second.second) + ")"});
  return out;
}

std::vector<std::string> catalog_names() {
  return {"unit_square",    "lshape",         "schrodinger_simple",     "schrodinger_rough",
          "disc_diffusion", "disc_diffusion_corner34", "perforated"};
}

CatalogEntry catalog(const std::string& name, std::uint64_t seed) {
  if (name == "unit_square") return unit_square();
  if (name == "lshape") return lshape();
  if (name == "schrodinger_rough") return schrodinger_rough(seed);
  if (name == "schrodinger_simple") return schrodinger_simple(seed);
  if (name == "disc_diffusion") return disc_diffusion(name, 4, 8);
  if (name == "disc_diffusion_corner34") return disc_diffusion(name, 6, 8);
  if (name == "perforated") return perforated(3);
  if (name.rfind("perforated:", 0) == 0) {
    const std::string arg = name.substr(11);
    if (!arg.empty() && std::all_of(arg.begin(), arg.end(), ::isdigit) && arg.size() < 4)
      return perforated(std::stoi(arg));
  }
  std::string msg = "unknown problem '" + name + "'; available:";
  for (const auto& n : catalog_names()) msg += " " + n;
  throw UnknownProblem(msg);
}

Polynomial2D source_by_name(const std::string& name) {
  if (name == "one") return Polynomial2D::constant(1.0);
  if (name == "1-3x") return {{{1.0, 0, 0}, {-3.0, 1, 0}}};
  throw ProblemError("unknown source '" + name + "'; available: one 1-3x");
}

void write_problem_json(std::ostream& os, const ProblemSpec& spec) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["name"] = spec.name;
  j["seed"] = spec.seed;
  j["gamma"] = spec.gamma;
  j["initial_order"] = spec.initial_order;
  const RootGrid& g = spec.grid;
  j["root_grid"] = {{"x0", g.x0}, {"y0", g.y0}, {"hx", g.hx}, {"hy", g.hy}, {"nx", g.nx}, {"ny", g.ny}};
  ordered_json subs = ordered_json::array();
  for (std::size_t s = 0; s < spec.subdomains.size(); ++s) {
    ordered_json rects = ordered_json::array();
    for (int cj = 0; cj < g.ny; ++cj)
      for (int ci = 0; ci < g.nx; ++ci)
        if (g.is_active(ci, cj) && spec.root_subdomain[ci + g.nx * cj] == static_cast<int>(s))
          rects.push_back({g.x0 + ci * g.hx, g.y0 + cj * g.hy, g.x0 + (ci + 1) * g.hx, g.y0 + (cj + 1) * g.hy});
    const Subdomain& sd = spec.subdomains[s];
    subs.push_back({{"id", s}, {"A", {sd.A.xx, sd.A.xy, sd.A.yy}}, {"V", sd.V}, {"rectangles", rects}});
  }
  j["subdomains"] = subs;
  ordered_json terms = ordered_json::array();
  for (const auto& t : spec.source.terms) terms.push_back({{"c", t.c}, {"px", t.px}, {"py", t.py}});
  j["source"] = terms;
  if (!spec.note.empty()) j["note"] = spec.note;
  os << j.dump(1) << '\n';
}

}  // namespace lhp
