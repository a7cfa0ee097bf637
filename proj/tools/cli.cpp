#include "cli.hpp"

#include "grushin/calculus.hpp"
#include "grushin/estimates.hpp"
#include "grushin/geometry.hpp"
#include "grushin/hermite.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace grushin::cli {

namespace {

namespace calc = grushin::calculus;
namespace est = grushin::estimates;
namespace geo = grushin::geometry;
using json = nlohmann::ordered_json;

struct RunConfig {
  int d1 = 1, d2 = 1;
  int n_x = 64, n_y = 64;
  double x_extent = 16.0, y_extent = 16.0;
  int k_max = 32;
  std::string bump = "exp-smooth";
  std::uint64_t seed = 1;
  double tail_tol = 1e-3;
  double tolerance = -1.0;  // < 0: per-suite default
  int threads = 0;
  std::string output_dir = ".";

  calc::GridSpec grid() const {
    calc::GridSpec s;
    s.d1 = d1;
    s.d2 = d2;
    s.n_x = n_x;
    s.n_y = n_y;
    s.x_extent = x_extent;
    s.y_extent = y_extent;
    s.k_max = k_max;
    s.validate();
    return s;
  }

  json to_json() const {
    return json{{"d1", d1},           {"d2", d2},
                {"n_x", n_x},         {"n_y", n_y},
                {"x_extent", x_extent}, {"y_extent", y_extent},
                {"k_max", k_max},     {"bump", bump},
                {"seed", seed},       {"tail_tol", tail_tol},
                {"tolerance", tolerance}, {"threads", threads},
                {"output_dir", output_dir}};
  }

  void load(const std::filesystem::path& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error("cannot open config " + p.string());
    json j = json::parse(is);
    d1 = j.value("d1", d1);
    d2 = j.value("d2", d2);
    n_x = j.value("n_x", n_x);
    n_y = j.value("n_y", n_y);
    x_extent = j.value("x_extent", x_extent);
    y_extent = j.value("y_extent", y_extent);
    k_max = j.value("k_max", k_max);
    bump = j.value("bump", bump);
    seed = j.value("seed", seed);
    tail_tol = j.value("tail_tol", tail_tol);
    tolerance = j.value("tolerance", tolerance);
    threads = j.value("threads", threads);
    output_dir = j.value("output_dir", output_dir);
  }
};

double tol_or(const RunConfig& cfg, double dflt) {
  return cfg.tolerance > 0.0 ? cfg.tolerance : dflt;
}

calc::Symbol1D parse_symbol(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("symbol spec: expected key=value in '" + item + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto num = [&kv](const std::string& k, double dflt,
                   bool required = false) -> double {
    auto it = kv.find(k);
    if (it == kv.end()) {
      if (required) throw std::runtime_error("symbol spec: missing key " + k);
      return dflt;
    }
    return std::stod(it->second);
  };
  if (name == "bochner-riesz")
    return calc::bochner_riesz(num("delta", 0.0, true), num("t", 1.0));
  if (name == "bump") return calc::even_bump(num("lo", 0.0, true), num("hi", 0.0, true));
  if (name == "indicator")
    return calc::indicator(num("lo", 0.0, true), num("hi", 0.0, true));
  if (name == "cosine") return calc::cosine(num("t", 0.0, true));
  if (name == "constant") return calc::constant(num("value", 1.0));
  if (name == "table") {
    auto it = kv.find("path");
    if (it == kv.end()) throw std::runtime_error("symbol spec: table needs path=");
    std::ifstream is(it->second);
    if (!is) throw std::runtime_error("cannot open symbol table " + it->second);
    std::vector<double> lambdas;
    std::vector<calc::cplx_t> vals;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::stringstream row(line);
      std::string c;
      double v[3] = {0, 0, 0};
      int i = 0;
      while (std::getline(row, c, ',') && i < 3) v[i++] = std::stod(c);
      if (i < 2) throw std::runtime_error("symbol table: need lambda,re[,im] rows");
      lambdas.push_back(v[0]);
      vals.emplace_back(v[1], v[2]);
    }
    if (vals.size() < 4) throw std::runtime_error("symbol table: too few rows");
    const double extent = std::max(std::abs(lambdas.front()), std::abs(lambdas.back()));
    return calc::sampled_symbol(std::move(vals), extent, "table:" + it->second);
  }
  throw std::runtime_error("unknown symbol preset '" + name + "'");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<double> parse_point(const std::string& s, int want) {
  auto v = parse_list(s);
  if (static_cast<int>(v.size()) != want)
    throw std::runtime_error("expected " + std::to_string(want) + " coordinates");
  return v;
}

void write_tail_report(const std::filesystem::path& p, const calc::TailReport& t,
                       const RunConfig& cfg, const std::string& symbol) {
  json j{{"schema_version", 1},
         {"config", cfg.to_json()},
         {"symbol", symbol},
         {"input_energy", t.input_energy},
         {"tail_energy", t.tail_energy},
         {"tail_fraction", t.fraction()},
         {"worst_slice_fraction", t.worst_slice_fraction},
         {"uncovered_slices", t.uncovered_slices},
         {"n_slices", t.n_slices}};
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << j.dump(2) << "\n";
}

int finish_report(est::ExperimentReport& rep, const RunConfig& cfg,
                  const std::string& suite) {
  rep.config = cfg.to_json();
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / ("report-" + suite + ".json");
  rep.save(path);
  std::cout << "[" << rep.verdict << "] " << rep.experiment;
  if (rep.fit.contains("exponent"))
    std::cout << ": exponent " << rep.fit["exponent"].dump() << " vs predicted "
              << rep.fit["predicted"].dump();
  std::cout << " (report: " << path.string() << ")\n";
  return rep.verdict == "FAIL" ? 2 : 0;
}

// --------------------------------------------------------------------------
// verify suites
// --------------------------------------------------------------------------

int verify_hermite(const RunConfig& cfg) {
  using namespace grushin::hermite;
  const double gram_tol = tol_or(cfg, 1e-8);
  const double trace_tol = 1e-6;
  const int kmax = cfg.k_max > 32 ? 12 : cfg.k_max;
  const double X = 2.5 * std::sqrt(2.0 * kmax + 1.0);

  est::ExperimentReport rep;
  rep.experiment = "hermite-suite";
  rep.inputs = {{"d1", cfg.d1}, {"k_max", kmax}, {"extent", X}};
  rep.hypothesis = {{"in_hypothesis", true}};

  bool pass = true;
  {
    auto plan = HermiteEvalPlan::uniform(cfg.d1, kmax, X, 12 * kmax);
    const double g1 = gram_max_residual(plan, 1.0);
    const double g2 = gram_max_residual(plan, 2.0);
    const double worst = std::max(g1, g2);
    pass = pass && worst <= gram_tol;
    rep.series.push_back({{"check", "gram"}, {"value", worst}, {"bound", gram_tol}});
  }
  {
    std::vector<int> entries(cfg.d1, 0);
    entries[0] = std::min(3, kmax);
    MultiIndex nu(entries);
    double prev = -1.0, worst_ratio = 1e300;
    for (int n : {48, 96, 192}) {
      auto plan = HermiteEvalPlan::uniform(cfg.d1, kmax, 10.0, n);
      const double res = eigen_residual(plan, nu, 1.3);
      if (prev > 0.0) worst_ratio = std::min(worst_ratio, prev / res);
      rep.series.push_back({{"check", "eigen-residual"}, {"n", n}, {"value", res}});
      prev = res;
    }
    pass = pass && worst_ratio >= 4.0;
    rep.extras["eigen_residual_min_ratio"] = worst_ratio;
  }
  {
    auto plan = HermiteEvalPlan::uniform(cfg.d1, kmax, X, 12 * kmax);
    double worst = 0.0;
    for (int k : {0, kmax / 2, kmax}) {
      const double tr = kernel_trace(EigenIndex(k, cfg.d1), 1.0, plan);
      const double dim = static_cast<double>(eigenspace_dim(k, cfg.d1));
      worst = std::max(worst, std::abs(tr - dim) / dim);
      rep.series.push_back({{"check", "trace"}, {"k", k}, {"value", tr}, {"dim", dim}});
    }
    pass = pass && worst <= trace_tol;
    rep.extras["trace_worst_rel"] = worst;
  }
  rep.verdict = pass ? "PASS" : "FAIL";
  RunConfig c = cfg;
  return finish_report(rep, c, "hermite");
}

int verify_plancherel(const RunConfig& cfg) {
  const calc::GridSpec spec = cfg.grid();
  auto bump = std::make_shared<const calc::DyadicBump>();
  const calc::Symbol1D F = calc::even_bump(0.5, 2.0);

  // Pure y-mode times an x-Gaussian: empty eta = 0 plane by construction.
  calc::GridFunction f = calc::GridFunction::zeros(spec);
  {
    const int bin = spec.n_y / 8;
    const double eta0 = spec.eta(bin);
    std::vector<int> xi(spec.d1), yi(spec.d2);
    const std::size_t NY = spec.ny_total();
    for (std::size_t ix = 0; ix < spec.nx_total(); ++ix) {
      spec.x_indices(ix, xi);
      double q = 0.0;
      for (int a = 0; a < spec.d1; ++a) {
        const double c = spec.x_coord(xi[a]);
        q += c * c;
      }
      const double gx = std::exp(-0.5 * q);
      for (std::size_t iy = 0; iy < NY; ++iy) {
        spec.y_indices(iy, yi);
        double phase = 0.0;
        for (int a = 0; a < spec.d2; ++a) phase += eta0 * spec.y_coord(yi[a]);
        f.values[ix * NY + iy] = gx * calc::cplx{std::cos(phase), std::sin(phase)};
      }
    }
  }

  est::ExperimentReport rep;
  rep.experiment = "joint-calculus-suite";
  rep.inputs = {{"d1", spec.d1}, {"d2", spec.d2},   {"n_x", spec.n_x},
                {"n_y", spec.n_y}, {"k_max", spec.k_max}, {"symbol", F.name}};
  rep.hypothesis = {{"in_hypothesis", true}};
  bool pass = true;

  {  // Spectral-sum Plancherel identity.
    const calc::JointSymbol G2 = calc::band_truncate(F, 2, bump);
    const auto applied = calc::apply_joint(G2, f, {.tail_tol = 1.0, .fail_on_tail = false});
    const double direct = std::pow(applied.out.norm2(), 2);
    const double spectral = est::spectral_sq_norm(G2, f);
    const double rel = std::abs(direct - spectral) / std::max(spectral, 1e-300);
    pass = pass && rel <= 1e-8;
    rep.series.push_back({{"check", "plancherel"},
                          {"direct", direct},
                          {"spectral", spectral},
                          {"rel_err", rel},
                          {"bound", 1e-8}});
  }
  {  // Reconstruction sum of band truncations vs direct application.
    const auto direct = calc::apply_multiplier(F, f, {.tail_tol = 1.0, .fail_on_tail = false});
    calc::GridFunction sum = calc::GridFunction::zeros(spec);
    const int ell_lo = spec.d1 >= 2 ? 1 : 0;
    for (int ell = ell_lo; ell <= 8; ++ell) {
      const auto piece =
          calc::apply_joint(calc::band_truncate(F, ell, bump), f,
                            {.tail_tol = 1.0, .fail_on_tail = false});
      for (std::size_t i = 0; i < sum.values.size(); ++i)
        sum.values[i] += piece.out.values[i];
    }
    double num = 0.0;
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      num += std::norm(sum.values[i] - direct.out.values[i]);
    const double rel =
        std::sqrt(num * spec.cell_volume()) / std::max(direct.out.norm2(), 1e-300);
    const double budget = std::max(direct.tail.fraction(), 1e-8);
    pass = pass && rel <= budget;
    rep.series.push_back({{"check", "reconstruction"},
                          {"rel_err", rel},
                          {"budget", budget},
                          {"ell_lo", ell_lo},
                          {"tail_fraction", direct.tail.fraction()}});
  }
  {  // Band disjointness for |l - l'| >= 2.
    const auto inner = calc::apply_joint(calc::band_truncate(F, 4, bump), f,
                                         {.tail_tol = 1.0, .fail_on_tail = false});
    const auto outer = calc::apply_joint(calc::band_truncate(F, 2, bump), inner.out,
                                         {.tail_tol = 1.0, .fail_on_tail = false});
    const double rel = outer.out.norm2() / std::max(f.norm2(), 1e-300);
    pass = pass && rel <= 1e-10;
    rep.series.push_back(
        {{"check", "band-disjointness"}, {"value", rel}, {"bound", 1e-10}});
  }
  rep.verdict = pass ? "PASS" : "FAIL";
  RunConfig c = cfg;
  return finish_report(rep, c, "plancherel");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Joint functional calculus of the Grushin operator: apply "
               "multipliers, query the comparison geometry, verify the "
               "quantitative estimates"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--d1", cfg.d1, "first-layer dimension");
  app.add_option("--d2", cfg.d2, "second-layer dimension");
  app.add_option("--nx", cfg.n_x, "per-axis x samples");
  app.add_option("--ny", cfg.n_y, "per-axis y samples");
  app.add_option("--xext", cfg.x_extent, "x half-width");
  app.add_option("--yext", cfg.y_extent, "y half-width");
  app.add_option("--kmax", cfg.k_max, "Hermite truncation");
  app.add_option("--seed", cfg.seed, "probe RNG seed");
  app.add_option("--tail-tol", cfg.tail_tol, "truncation tail tolerance");
  app.add_option("--tolerance", cfg.tolerance, "verdict tolerance override");
  app.add_option("--threads", cfg.threads, "worker threads (0: default)")
      ->envname("GRUSHIN_THREADS");
  app.add_option("--out-dir", cfg.output_dir, "report output directory")
      ->envname("GRUSHIN_OUTPUT_DIR");

  // apply
  auto* apply = app.add_subcommand("apply", "apply F(sqrt L) to a stored grid function");
  std::string in_path, out_path, symbol_spec, tail_path;
  apply->add_option("--in", in_path, "input .grf file")->required();
  apply->add_option("--symbol", symbol_spec,
                    "symbol spec: bochner-riesz:delta=,t= | bump:lo=,hi= | "
                    "indicator:lo=,hi= | cosine:t= | constant:value= | table:path=")
      ->required();
  apply->add_option("--out", out_path, "output .grf file")->required();
  apply->add_option("--tail-report", tail_path, "tail report JSON path");

  // riesz
  auto* riesz = app.add_subcommand("riesz", "apply the Bochner-Riesz mean (1-tL)_+^delta");
  double rz_delta = 5.0, rz_t = 1.0;
  riesz->add_option("--delta", rz_delta, "Riesz order")->required();
  riesz->add_option("--t", rz_t, "scale t");
  riesz->add_option("--in", in_path, "input .grf file")->required();
  riesz->add_option("--out", out_path, "output .grf file")->required();
  riesz->add_option("--tail-report", tail_path, "tail report JSON path");

  // geodist
  auto* geod = app.add_subcommand("geodist", "comparison CC distance between two points");
  std::string zs, ws;
  geod->add_option("--z", zs, "first point, comma-separated d1+d2 coords")->required();
  geod->add_option("--w", ws, "second point")->required();

  // cover
  auto* cov = app.add_subcommand("cover", "build a covering decomposition of a box");
  std::string region_spec, lambda_spec = "2";
  double cover_R = 1.0;
  cov->add_option("--region", region_spec, "box as lo1,lo2,..:hi1,hi2,..")->required();
  cov->add_option("--R", cover_R, "cell radius")->required();
  cov->add_option("--lambda", lambda_spec, "dilation factors, comma-separated");
  cov->add_option("--out", out_path, "write summary JSON here (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->require_subcommand(1);
  auto* v_hermite = verify->add_subcommand("hermite", "Gram/eigen/trace checks");
  auto* v_plan = verify->add_subcommand("plancherel", "joint-calculus identities");
  auto* v_rest = verify->add_subcommand("restriction", "truncated restriction decay");
  double p = 1.0;
  int lmin = 1, lmax = 5;
  std::string mode = "band";
  v_rest->add_option("--p", p, "Lebesgue exponent in [1,2]");
  v_rest->add_option("--lmin", lmin, "first band");
  v_rest->add_option("--lmax", lmax, "last band");
  v_rest->add_option("--mode", mode, "band | tail");
  auto* v_wp = verify->add_subcommand("weighted-plancherel", "weighted kernel growth");
  int wp_N = 0;
  v_wp->add_option("--N", wp_N, "weight power N");
  v_wp->add_option("--lmin", lmin, "first band");
  v_wp->add_option("--lmax", lmax, "last band");
  auto* v_prop = verify->add_subcommand("propagation", "finite propagation leakage");
  double prop_t = 0.5, prop_eps = 0.5;
  std::string refine_spec = "48,64,96";
  v_prop->add_option("--t", prop_t, "propagation time");
  v_prop->add_option("--eps", prop_eps, "radius margin");
  v_prop->add_option("--refine", refine_spec, "grid sizes, comma-separated");
  auto* v_riesz = verify->add_subcommand("riesz", "Bochner-Riesz t-uniformity");
  double vr_delta = 5.0, vr_p = 1.0;
  std::string vr_tlist = "0.25,1,4";
  bool vr_refine = false;
  v_riesz->add_option("--delta", vr_delta, "Riesz order");
  v_riesz->add_option("--p", vr_p, "Lebesgue exponent");
  v_riesz->add_option("--t", vr_tlist, "scales, comma-separated");
  v_riesz->add_flag("--refine", vr_refine, "also run at doubled resolution");
  auto* v_st = verify->add_subcommand("stein-tomas", "Stein-Tomas type condition");
  double st_p0 = 1.0, st_R = 8.0, st_a = 0.0;
  std::string st_tlist = "0.25,0.5,1";
  v_st->add_option("--p0", st_p0, "exponent p0");
  v_st->add_option("--R", st_R, "ball radius");
  v_st->add_option("--a", st_a, "first-layer center |a|");
  v_st->add_option("--t", st_tlist, "scales, comma-separated (each < R)");

  // export
  auto* expo = app.add_subcommand("export", "convert a report JSON to CSV (series only)");
  std::string report_path;
  expo->add_option("--report", report_path, "report JSON")->required();
  expo->add_option("--out", out_path, "CSV output path")->required();

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (!config_path.empty()) {
      // File values apply wherever the flag was not given on the command line.
      RunConfig file_cfg;
      file_cfg.load(config_path);
      if (app.count("--d1") == 0) cfg.d1 = file_cfg.d1;
      if (app.count("--d2") == 0) cfg.d2 = file_cfg.d2;
      if (app.count("--nx") == 0) cfg.n_x = file_cfg.n_x;
      if (app.count("--ny") == 0) cfg.n_y = file_cfg.n_y;
      if (app.count("--xext") == 0) cfg.x_extent = file_cfg.x_extent;
      if (app.count("--yext") == 0) cfg.y_extent = file_cfg.y_extent;
      if (app.count("--kmax") == 0) cfg.k_max = file_cfg.k_max;
      if (app.count("--seed") == 0) cfg.seed = file_cfg.seed;
      if (app.count("--tail-tol") == 0) cfg.tail_tol = file_cfg.tail_tol;
      if (app.count("--tolerance") == 0) cfg.tolerance = file_cfg.tolerance;
      if (app.count("--threads") == 0) cfg.threads = file_cfg.threads;
      if (app.count("--out-dir") == 0) cfg.output_dir = file_cfg.output_dir;
    }
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif

    if (apply->parsed() || riesz->parsed()) {
      const calc::Symbol1D F = apply->parsed()
                                   ? parse_symbol(symbol_spec)
                                   : calc::bochner_riesz(rz_delta, rz_t);
      const calc::GridFunction f = calc::load_grf(in_path);
      const auto res =
          calc::apply_multiplier(F, f, {.tail_tol = 1.0, .fail_on_tail = false});
      calc::save_grf(out_path, res.out);
      if (!tail_path.empty()) write_tail_report(tail_path, res.tail, cfg, F.name);
      if (res.tail.fraction() > cfg.tail_tol)
        std::cout << "warning: truncation tail fraction " << res.tail.fraction()
                  << " exceeds tolerance " << cfg.tail_tol << "\n";
      return 0;
    }

    if (geod->parsed()) {
      const auto zv = parse_point(zs, cfg.d1 + cfg.d2);
      const auto wv = parse_point(ws, cfg.d1 + cfg.d2);
      geo::CCPoint z{{zv.begin(), zv.begin() + cfg.d1}, {zv.begin() + cfg.d1, zv.end()}};
      geo::CCPoint w{{wv.begin(), wv.begin() + cfg.d1}, {wv.begin() + cfg.d1, wv.end()}};
      std::cout << geo::cc_distance(z, w) << "\n";
      return 0;
    }

    if (cov->parsed()) {
      const auto colon = region_spec.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("cover: region must be lo,..:hi,..");
      geo::Box region{parse_point(region_spec.substr(0, colon), cfg.d1 + cfg.d2),
                      parse_point(region_spec.substr(colon + 1), cfg.d1 + cfg.d2)};
      const auto lambdas = parse_list(lambda_spec);
      const geo::Cover cv = geo::cover(region, cfg.d1, cover_R, lambdas);
      json j{{"cells", cv.cells.size()}, {"R", cv.R}};
      for (const auto& [lam, bound] : cv.overlap_bound)
        j["overlap_bound"][std::to_string(lam)] = bound;
      if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream os(out_path);
        os << j.dump(2) << "\n";
      }
      return 0;
    }

    if (v_hermite->parsed()) {
      RunConfig c = cfg;
      if (app.count("--d1") == 0) c.d1 = 2;
      if (app.count("--kmax") == 0) c.k_max = 12;
      return verify_hermite(c);
    }
    if (v_plan->parsed()) return verify_plancherel(cfg);
    if (v_rest->parsed()) {
      est::RestrictionOptions opts;
      opts.d1 = app.count("--d1") ? cfg.d1 : 2;
      opts.d2 = app.count("--d2") ? cfg.d2 : 2;
      opts.tolerance = tol_or(cfg, 0.2);
      opts.tail_mode = mode == "tail";
      if (mode != "band" && mode != "tail")
        throw std::runtime_error("restriction: mode must be band or tail");
      opts.seed = cfg.seed;
      if (p > 1.0 && p < 2.0) {
        calc::GridSpec ps = cfg.grid();
        ps.d1 = opts.d1;
        ps.d2 = opts.d2;
        if (app.count("--nx") == 0) ps.n_x = opts.d1 > 1 ? 16 : 64;
        if (app.count("--ny") == 0) ps.n_y = opts.d2 > 1 ? 16 : 64;
        ps.validate();
        opts.probe_spec = ps;
      }
      std::vector<int> ells;
      for (int l = lmin; l <= lmax; ++l) ells.push_back(l);
      auto rep = est::restriction_decay(calc::even_bump(0.5, 2.0), p, ells, opts);
      RunConfig c = cfg;
      c.d1 = opts.d1;
      c.d2 = opts.d2;
      return finish_report(rep, c, "restriction");
    }
    if (v_wp->parsed()) {
      est::WeightedPlancherelOptions opts;
      calc::GridSpec s;
      s.d1 = 2;  // low bands hold whole eigenspaces; d1 = 1 degenerates at l = 1
      s.d2 = app.count("--d2") ? cfg.d2 : 1;
      s.n_x = 64;
      s.n_y = 1024;
      s.x_extent = 10.0;
      s.y_extent = 512.0;
      s.k_max = 32;
      opts.spec = s;
      opts.tolerance = tol_or(cfg, 0.3);
      std::vector<int> ells;
      for (int l = lmin; l <= lmax; ++l) ells.push_back(l);
      // Off-axis center: on x = 0 the odd Hermite orders vanish and low
      // bands would carry no column at d1 = 1.
      geo::CCPoint center{std::vector<double>(s.d1, 0.0), std::vector<double>(s.d2, 0.0)};
      center.x[0] = 0.5;
      auto rep = est::weighted_plancherel(calc::even_bump(0.5, 2.0), wp_N, ells,
                                          center, opts);
      return finish_report(rep, cfg, "weighted-plancherel");
    }
    if (v_prop->parsed()) {
      est::PropagationOptions opts;
      opts.eps = prop_eps;
      for (double v : parse_list(refine_spec)) opts.refine.push_back(static_cast<int>(v));
      calc::GridSpec s = cfg.grid();
      s.d1 = 1;
      s.d2 = 1;
      s.x_extent = s.y_extent = 8.0;
      // The cap must not bind; the resolvability clamp governs per slice.
      s.k_max = std::max(s.k_max, 1024);
      auto rep = est::propagation_leakage(prop_t, s, opts);
      return finish_report(rep, cfg, "propagation");
    }
    if (v_riesz->parsed()) {
      est::RieszOptions opts;
      calc::GridSpec s = cfg.grid();
      s.d1 = 1;
      s.d2 = 1;
      // The ratio spread is first order in pi/Y; the suite needs frequency
      // resolution beyond the generic defaults.
      if (app.count("--nx") == 0) s.n_x = 128;
      if (app.count("--ny") == 0) s.n_y = 256;
      if (app.count("--yext") == 0) s.y_extent = 32.0;
      if (app.count("--kmax") == 0) s.k_max = 40;
      opts.spec = s;
      opts.seed = cfg.seed;
      opts.refine = vr_refine;
      const auto ts = parse_list(vr_tlist);
      auto rep = est::riesz_uniformity(vr_delta, vr_p, ts, opts);
      return finish_report(rep, cfg, "riesz");
    }
    if (v_st->parsed()) {
      est::SteinTomasOptions opts;
      opts.d1 = app.count("--d1") ? cfg.d1 : 2;
      opts.d2 = app.count("--d2") ? cfg.d2 : 1;
      opts.tolerance = tol_or(cfg, 0.3);
      geo::Ball B;
      B.center.x.assign(opts.d1, 0.0);
      B.center.x[0] = st_a;
      B.center.y.assign(opts.d2, 0.0);
      B.radius = st_R;
      const auto ts = parse_list(st_tlist);
      auto rep = est::stein_tomas_condition(calc::even_bump(0.25, 1.0), ts, B, st_p0,
                                            opts);
      RunConfig c = cfg;
      c.d1 = opts.d1;
      c.d2 = opts.d2;
      return finish_report(rep, c, "stein-tomas");
    }

    if (expo->parsed()) {
      std::ifstream is(report_path);
      if (!is) throw std::runtime_error("cannot open report " + report_path);
      json j = json::parse(is);
      if (!j.contains("series")) throw std::runtime_error("report has no series");
      est::ExperimentReport rep;
      rep.experiment = j.value("experiment", "?");
      for (const auto& row : j["series"]) rep.series.push_back(row);
      std::ofstream os(out_path);
      if (!os) throw std::runtime_error("cannot write " + out_path);
      os << rep.to_csv();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand handled\n";
  return 1;
}

}  // namespace grushin::cli
