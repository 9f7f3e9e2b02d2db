#include "btu/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "btu/duffing.hpp"
#include "btu/equilibria.hpp"
#include "btu/errors.hpp"
#include "btu/flow.hpp"
#include "btu/melnikov.hpp"
#include "btu/memristor.hpp"

namespace btu {
namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::optional<double> tol_root;
  std::optional<double> tol_boundary;
  bool timestamp = false;
};

IntegratorConfig integrator(const Globals& g) {
  IntegratorConfig c;
  c.abs_tol = g.abs_tol;
  c.rel_tol = g.rel_tol;
  return c;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_finite(const Json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw NonFinite("non-finite value at " + where);
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], where + "[" + std::to_string(i) + "]");
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_finite(v, where + "." + k);
  }
}

Json document(const std::string& kind, const std::string& command, Json parameters,
              const Globals& g, Json payload, Json extra_metadata = Json::object()) {
  Json meta;
  meta["command"] = command;
  meta["parameters"] = std::move(parameters);
  meta["tolerances"] = {{"abs_tol", g.abs_tol},
                        {"rel_tol", g.rel_tol},
                        {"tol_root", optional_number(g.tol_root)},
                        {"tol_boundary", optional_number(g.tol_boundary)}};
  meta["timestamp"] = g.timestamp ? Json(utc_now()) : Json(nullptr);
  for (auto& [k, v] : extra_metadata.items()) meta[k] = v;
  Json doc;
  doc["schema_version"] = "1";
  doc["kind"] = kind;
  doc["metadata"] = std::move(meta);
  doc["payload"] = std::move(payload);
  check_finite(doc, "document");
  return doc;
}

Json curve_json(const Curve& c) {
  const bool with_param = c.param.size() == c.samples.size() && !c.param.empty();
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    Json row = {c.samples[i].mu2, c.samples[i].mu1};
    if (with_param) row.push_back(c.param[i]);
    rows.push_back(std::move(row));
  }
  Json cols = {"mu2", "mu1"};
  if (with_param) cols.push_back("theta");
  return {{"label", c.label}, {"mu3", c.mu3}, {"columns", cols}, {"data", rows}};
}

template <std::size_t N>
Json trajectory_json(const Trajectory<N>& tr) {
  static const char* names[] = {"x", "y", "z"};
  Json cols = {"t"};
  for (std::size_t k = 0; k < N; ++k) cols.push_back(names[k]);
  Json rows = Json::array();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    Json row = {tr.times[i]};
    for (double v : tr.states[i]) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return {{"columns", cols}, {"data", rows}};
}

std::string g17(double v) {
  if (!std::isfinite(v)) throw NonFinite("non-finite value in CSV output");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_curves(const std::filesystem::path& dir, const std::vector<Curve>& curves,
                      const std::vector<CodimTwoPoint>& points, std::ostream& out) {
  std::filesystem::create_directories(dir);
  for (const auto& c : curves) {
    const bool with_param = c.param.size() == c.samples.size() && !c.param.empty();
    const auto path = dir / (c.label + ".csv");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << (with_param ? "mu2,mu1,theta\r\n" : "mu2,mu1\r\n");
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
      f << g17(c.samples[i].mu2) << ',' << g17(c.samples[i].mu1);
      if (with_param) f << ',' << g17(c.param[i]);
      f << "\r\n";
    }
    out << path.string() << '\n';
  }
  if (!points.empty()) {
    const auto path = dir / "special_points.csv";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "label,mu2,mu1\r\n";
    for (const auto& p : points) f << to_string(p.label) << ',' << g17(p.mu2) << ',' << g17(p.mu1) << "\r\n";
    out << path.string() << '\n';
  }
}

void emit(const Json& doc, const std::string& out_path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
}

Json points_json(const std::vector<CodimTwoPoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back({{"label", to_string(p.label)}, {"mu2", p.mu2}, {"mu1", p.mu1}});
  return arr;
}

Json mu_json(const MuParams& mu) { return {{"mu1", mu.mu1}, {"mu2", mu.mu2}, {"mu3", mu.mu3}}; }

Json equilibria_json(const MuParams& mu, double tol_root) {
  Json arr = Json::array();
  for (const auto& e : solve_equilibria(mu, tol_root)) {
    arr.push_back({{"x", e.x}, {"y", 0.0}, {"kind", to_string(e.kind)}, {"trace", e.trace}, {"det", e.det}});
  }
  return arr;
}

void require_positive_mu3(double mu3) {
  if (!(mu3 > 0.0)) throw UsageError("mu3 must be positive");
}

struct MemristorOptions {
  double a = 0.0, b = 0.0, beta = 0.0, xi = 0.0;
  std::optional<double> alpha;

  void add(CLI::App* app) {
    app->add_option("--a", a, "quadratic coefficient of q")->required();
    app->add_option("--b", b, "linear coefficient of q")->required();
    app->add_option("--beta", beta)->required();
    app->add_option("--xi", xi)->required();
    app->add_option("--alpha", alpha, "circuit alpha; parameters are normalized when given");
  }

  MemristorParams params() const {
    if (alpha) return normalize_alpha({a, b, beta, xi, *alpha});
    return {a, b, beta, xi, std::nullopt};
  }

  Json json() const {
    Json j = {{"a", a}, {"b", b}, {"beta", beta}, {"xi", xi}, {"alpha", optional_number(alpha)}};
    return j;
  }
};

Json normalized_json(const MemristorParams& p) {
  return {{"a", p.a}, {"b", p.b}, {"beta", p.beta}, {"xi", p.xi}};
}

Json bounds_json(const SphereBounds& sb) {
  Json hyp = Json::array();
  for (const auto& h : sb.hypotheses) hyp.push_back({{"name", h.name}, {"holds", h.holds}});
  return {{"A", sb.A},
          {"B", sb.B},
          {"h_interval", {sb.h_lo, sb.h_hi}},
          {"hopf_h_interval", {sb.hopf_h_lo, sb.hopf_h_hi}},
          {"hypotheses", hyp}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bogdanov-Takens unfolding: bifurcation curves, shooting and memristor reductions",
               "btu"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--abs-tol", g.abs_tol, "integrator absolute tolerance")->capture_default_str();
  app.add_option("--rel-tol", g.rel_tol, "integrator relative tolerance")->capture_default_str();
  app.add_option("--tol-root", g.tol_root, "root tolerance for equilibria and special points");
  app.add_option("--tol-boundary", g.tol_boundary, "region boundary tolerance");
  app.add_flag("--timestamp", g.timestamp, "record the UTC time in the metadata");

  std::function<void()> action;

  // bifset
  struct {
    double mu3 = 0.0;
    std::size_t resolution = 200;
    std::string out, format = "json";
  } bif;
  auto* bifset = app.add_subcommand("bifset", "all bifurcation curves and special points");
  bifset->add_option("--mu3", bif.mu3)->required();
  bifset->add_option("--resolution", bif.resolution)->check(CLI::Range(2, 1000000))->capture_default_str();
  bifset->add_option("--out", bif.out, "JSON file, or directory for CSV");
  bifset->add_option("--format", bif.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  bifset->callback([&] {
    action = [&] {
      require_positive_mu3(bif.mu3);
      if (bif.format == "csv" && bif.out.empty()) throw UsageError("--format csv needs --out DIR");
      BifurcationSet bs = assemble_bifset(bif.mu3, bif.resolution);
      if (g.tol_root) bs.points = special_points(bif.mu3, *g.tol_root);
      Json curves = Json::array();
      for (const auto& c : bs.curves) curves.push_back(curve_json(c));
      const Json doc = document("curves", "bifset", {{"mu3", bif.mu3}, {"resolution", bif.resolution}},
                                g, {{"curves", curves}, {"points", points_json(bs.points)}});
      if (bif.format == "csv") {
        write_csv_curves(bif.out, bs.curves, bs.points, out);
      } else {
        emit(doc, bif.out, out);
      }
    };
  });

  // melnikov
  auto* melnikov = app.add_subcommand("melnikov", "Melnikov functions and their quadrature oracles");
  melnikov->require_subcommand(1);
  melnikov->fallthrough();
  struct {
    double nu1 = 0.0, nu2 = 0.0, nu3 = 1.0, t_span = 0.0;
    bool oracle = false;
  } het;
  auto* het_cmd = melnikov->add_subcommand("het", "heteroclinic Melnikov function");
  het_cmd->add_option("--nu1", het.nu1)->capture_default_str();
  het_cmd->add_option("--nu2", het.nu2)->required();
  het_cmd->add_option("--nu3", het.nu3)->capture_default_str();
  het_cmd->add_option("--t-span", het.t_span, "quadrature half-span, 0 picks one");
  het_cmd->add_flag("--oracle", het.oracle, "also evaluate the quadrature");
  het_cmd->callback([&] {
    action = [&] {
      Json payload;
      const double closed = m_het_closed(het.nu1, het.nu2, het.nu3);
      payload["closed"] = closed;
      payload["closed_lower"] = m_het_closed_lower(het.nu1, het.nu2, het.nu3);
      if (het.oracle) {
        const double quad = m_het_quadrature(het.nu1, het.nu2, het.nu3, het.t_span);
        payload["quadrature"] = quad;
        payload["reldiff"] = std::abs(closed - quad) / (1.0 + std::abs(closed));
      }
      emit(document("report", "melnikov het",
                    {{"nu1", het.nu1}, {"nu2", het.nu2}, {"nu3", het.nu3}, {"oracle", het.oracle}}, g,
                    payload),
           "", out);
    };
  });

  struct {
    std::optional<double> theta, nu1, nu2;
    bool oracle = false, check_curve = false;
    double tol = 1e-5;
  } hom;
  auto* hom_cmd = melnikov->add_subcommand("hom", "homoclinic Melnikov function");
  hom_cmd->add_option("--theta", hom.theta, "curve parameter; fixes nu1 and nu2");
  hom_cmd->add_option("--nu1", hom.nu1);
  hom_cmd->add_option("--nu2", hom.nu2);
  hom_cmd->add_flag("--oracle", hom.oracle, "also evaluate the loop-area integral");
  hom_cmd->add_flag("--check-curve", hom.check_curve,
                    "check that the area integral vanishes on the curve point of --theta");
  hom_cmd->add_option("--tol", hom.tol, "relative tolerance of --check-curve")->capture_default_str();
  hom_cmd->callback([&] {
    action = [&] {
      if (!hom.theta && !(hom.nu1 && hom.nu2)) throw UsageError("give --theta or both --nu1 and --nu2");
      if (hom.check_curve && !hom.theta) throw UsageError("--check-curve needs --theta");
      double nu1 = 0.0, nu2 = 0.0;
      if (hom.theta) {
        const auto p = hom_param(*hom.theta);
        nu1 = hom.nu1.value_or(p.nu1);
        nu2 = hom.nu2.value_or(p.nu2);
      } else {
        nu1 = *hom.nu1;
        nu2 = *hom.nu2;
      }
      Json payload = {{"nu1", nu1}, {"nu2", nu2}};
      std::optional<double> closed;
      if (hom.theta) {
        closed = m_hom_closed(*hom.theta, nu2);
        payload["closed"] = *closed;
      }
      if (hom.oracle || hom.check_curve || !hom.theta) {
        const auto loop = hom_loop_integrals(nu1, nu2);
        payload["area_integral"] = loop.melnikov;
        payload["loop_area"] = loop.area;
        if (closed) payload["reldiff"] = std::abs(*closed - loop.melnikov) / (1.0 + std::abs(*closed));
        if (hom.check_curve) {
          const double residual = std::abs(loop.melnikov) / loop.area;
          payload["curve_residual"] = residual;
          payload["curve_tolerance"] = hom.tol;
          payload["on_curve"] = residual <= hom.tol;
        }
      }
      emit(document("report", "melnikov hom",
                    {{"theta", optional_number(hom.theta)},
                     {"nu1", optional_number(hom.nu1)},
                     {"nu2", optional_number(hom.nu2)},
                     {"oracle", hom.oracle},
                     {"check_curve", hom.check_curve}},
                    g, payload),
           "", out);
    };
  });

  // shoot
  struct {
    double mu3 = 0.0, theta_lo = 0.05, theta_hi = 10.0;
    int samples = 25;
    std::string out, format = "json";
  } sh;
  auto* shoot = app.add_subcommand("shoot", "numeric homoclinic curve next to the analytic one");
  shoot->add_option("--mu3", sh.mu3)->required();
  shoot->add_option("--samples", sh.samples)->capture_default_str();
  shoot->add_option("--theta-lo", sh.theta_lo)->capture_default_str();
  shoot->add_option("--theta-hi", sh.theta_hi)->capture_default_str();
  shoot->add_option("--out", sh.out, "JSON file, or directory for CSV");
  shoot->add_option("--format", sh.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  shoot->callback([&] {
    action = [&] {
      require_positive_mu3(sh.mu3);
      if (sh.samples < 2) throw UsageError("--samples must be at least 2");
      if (!(sh.theta_lo > 0.0 && sh.theta_hi > sh.theta_lo)) {
        throw UsageError("need 0 < --theta-lo < --theta-hi");
      }
      if (sh.format == "csv" && sh.out.empty()) throw UsageError("--format csv needs --out DIR");
      const auto thetas = default_theta_grid(static_cast<std::size_t>(sh.samples), sh.theta_lo, sh.theta_hi);
      const auto res = homoclinic_continuation_theta(sh.mu3, thetas, integrator(g));
      const Curve numeric = res.numeric_curve(), analytic = res.analytic_curve();
      Json failures = Json::array(), roots = Json::array();
      for (const auto& p : res.points) {
        if (p.numeric) {
          roots.push_back({{"theta", p.theta}, {"gap", p.gap}});
        } else {
          failures.push_back({{"theta", p.theta}, {"reason", p.failure}});
        }
      }
      const Json doc = document(
          "curves", "shoot",
          {{"mu3", sh.mu3}, {"samples", sh.samples}, {"theta_lo", sh.theta_lo}, {"theta_hi", sh.theta_hi}}, g,
          {{"curves", {curve_json(numeric), curve_json(analytic)}}, {"roots", roots}},
          {{"failures", failures}});
      if (sh.format == "csv") {
        write_csv_curves(sh.out, {numeric, analytic}, {}, out);
      } else {
        emit(doc, sh.out, out);
      }
    };
  });

  // portrait
  struct {
    double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0, x0 = 0.1, y0 = 0.0, t_end = 50.0;
    std::string out;
  } por;
  auto* portrait = app.add_subcommand("portrait", "orbit, equilibria and limit cycle at one parameter point");
  portrait->add_option("--mu1", por.mu1)->required();
  portrait->add_option("--mu2", por.mu2)->required();
  portrait->add_option("--mu3", por.mu3)->required();
  portrait->add_option("--x0", por.x0)->capture_default_str();
  portrait->add_option("--y0", por.y0)->capture_default_str();
  portrait->add_option("--t-end", por.t_end)->check(CLI::PositiveNumber)->capture_default_str();
  portrait->add_option("--out", por.out);
  portrait->callback([&] {
    action = [&] {
      const MuParams mu{por.mu1, por.mu2, por.mu3};
      IntegratorConfig cfg = integrator(g);
      cfg.escape_radius = 1e3;
      const auto run = integrate<2>(unfolding_ode(mu), 0.0, State<2>{por.x0, por.y0}, por.t_end, cfg);
      Json payload;
      payload["equilibria"] = equilibria_json(mu, g.tol_root.value_or(kDefaultTolRoot));
      payload["trajectory"] = trajectory_json(run.trajectory);
      payload["escaped"] = run.status == IntegrationStatus::Escaped;
      const auto cycle = por.mu3 > 0.0 ? find_limit_cycle(mu, {por.x0, 0.0}, integrator(g)) : std::nullopt;
      if (cycle) {
        Json c = trajectory_json(*cycle);
        c["period"] = cycle->times.back() - cycle->times.front();
        payload["limit_cycle"] = c;
      } else {
        payload["limit_cycle"] = nullptr;
      }
      emit(document("trajectory", "portrait",
                    {{"mu", mu_json(mu)}, {"x0", por.x0}, {"y0", por.y0}, {"t_end", por.t_end}}, g, payload),
           por.out, out);
    };
  });

  // classify
  struct {
    double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
    bool label_only = false;
  } cls;
  auto* classify = app.add_subcommand("classify", "region of the bifurcation diagram");
  classify->add_option("--mu1", cls.mu1)->required();
  classify->add_option("--mu2", cls.mu2)->required();
  classify->add_option("--mu3", cls.mu3)->required();
  classify->add_flag("--label-only", cls.label_only, "print just the region label");
  classify->callback([&] {
    action = [&] {
      const MuParams mu{cls.mu1, cls.mu2, cls.mu3};
      const auto label = classify_region(mu, g.tol_boundary.value_or(-1.0));
      if (cls.label_only) {
        out << to_string(label.region) << '\n';
        return;
      }
      emit(document("report", "classify", {{"mu", mu_json(mu)}}, g,
                    {{"region", to_string(label.region)},
                     {"equilibria", equilibria_json(mu, g.tol_root.value_or(kDefaultTolRoot))}}),
           "", out);
    };
  });

  // memristor
  auto* memristor = app.add_subcommand("memristor", "cubic memristor oscillator");
  memristor->require_subcommand(1);
  memristor->fallthrough();

  MemristorOptions red_opts;
  double red_h = 0.0;
  auto* reduce = memristor->add_subcommand("reduce", "canonical parameters of one leaf");
  red_opts.add(reduce);
  reduce->add_option("--leaf", red_h, "value h of the first integral")->capture_default_str();
  reduce->callback([&] {
    action = [&] {
      const MemristorParams p = red_opts.params();
      const MuParams mu = to_canonical(p, red_h);
      Json payload = {{"normalized", normalized_json(p)}, {"mu", mu_json(mu)}};
      payload["region"] = mu.mu3 > 0.0 ? Json(to_string(classify_region(mu, g.tol_boundary.value_or(-1.0)).region))
                                       : Json(nullptr);
      payload["bounds"] = bounds_json(sphere_report(p));
      Json params = red_opts.json();
      params["h"] = red_h;
      emit(document("report", "memristor reduce", params, g, payload), "", out);
    };
  });

  MemristorOptions sph_opts;
  int sph_slices = 9;
  std::string sph_out;
  auto* sphere = memristor->add_subcommand("sphere", "closed orbits on slices of the invariant sphere");
  sph_opts.add(sphere);
  sphere->add_option("--slices", sph_slices)->check(CLI::Range(1, 10000))->capture_default_str();
  sphere->add_option("--out", sph_out);
  sphere->callback([&] {
    action = [&] {
      const MemristorParams p = sph_opts.params();
      const SphereBounds sb = sphere_bounds(p);
      const auto slices = sphere_slices(p, static_cast<std::size_t>(sph_slices), integrator(g));
      Json arr = Json::array();
      for (std::size_t i = 0; i < slices.orbits.size(); ++i) {
        Json s = trajectory_json(slices.orbits[i]);
        s["h"] = slices.h_values[i];
        s["amplitude"] = slices.amplitudes[i];
        s["period"] = slices.orbits[i].times.back() - slices.orbits[i].times.front();
        arr.push_back(std::move(s));
      }
      Json skipped = Json::array();
      for (const auto& s : slices.skipped) skipped.push_back({{"h", s.h}, {"reason", s.reason}});
      Json params = sph_opts.json();
      params["slices"] = sph_slices;
      emit(document("slices", "memristor sphere", params, g,
                    {{"normalized", normalized_json(p)}, {"bounds", bounds_json(sb)}, {"slices", arr},
                     {"skipped", skipped}}),
           sph_out, out);
    };
  });

  MemristorOptions sim_opts;
  double sim_x0 = 0.1, sim_y0 = 0.0, sim_z0 = 0.0, sim_t = 50.0;
  std::string sim_out;
  auto* simulate = memristor->add_subcommand("simulate", "integrate the 3D oscillator");
  sim_opts.add(simulate);
  simulate->add_option("--x0", sim_x0)->capture_default_str();
  simulate->add_option("--y0", sim_y0)->capture_default_str();
  simulate->add_option("--z0", sim_z0)->capture_default_str();
  simulate->add_option("--t-end", sim_t)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--out", sim_out);
  simulate->callback([&] {
    action = [&] {
      IntegratorConfig cfg = integrator(g);
      cfg.escape_radius = 1e6;
      Json payload;
      Trajectory<3> tr;
      double h0 = 0.0, drift = 0.0;
      if (sim_opts.alpha) {
        const CircuitParams raw{sim_opts.a, sim_opts.b, sim_opts.beta, sim_opts.xi, *sim_opts.alpha};
        tr = integrate<3>(circuit_field(raw), 0.0, SpaceState{sim_x0, sim_y0, sim_z0}, sim_t, cfg).trajectory;
        const MemristorParams p = normalize_alpha(raw);
        h0 = first_integral(p, normalize_state(tr.states.front(), raw.alpha));
        for (const auto& s : tr.states) {
          drift = std::max(drift, std::abs(first_integral(p, normalize_state(s, raw.alpha)) - h0));
        }
      } else {
        const MemristorParams p = sim_opts.params();
        tr = integrate<3>(memristor_field(p), 0.0, SpaceState{sim_x0, sim_y0, sim_z0}, sim_t, cfg).trajectory;
        h0 = first_integral(p, tr.states.front());
        for (const auto& s : tr.states) drift = std::max(drift, std::abs(first_integral(p, s) - h0));
      }
      payload["trajectory"] = trajectory_json(tr);
      payload["leaf"] = h0;
      payload["first_integral_drift"] = drift;
      Json params = sim_opts.json();
      params["start"] = {sim_x0, sim_y0, sim_z0};
      params["t_end"] = sim_t;
      emit(document("trajectory", "memristor simulate", params, g, payload), sim_out, out);
    };
  });

  // duffing
  auto* duffing = app.add_subcommand("duffing", "memristor Duffing oscillator");
  duffing->require_subcommand(1);
  duffing->fallthrough();
  struct {
    double alpha = 0.0, omega = 0.0, betad = 0.0, h = 0.0, t_final = 1e4, amplitude = 1.0;
  } duf;
  auto* audit = duffing->add_subcommand("audit", "return-map audit of the reduced system");
  audit->add_option("--alpha", duf.alpha)->required();
  audit->add_option("--omega", duf.omega)->required();
  audit->add_option("--betad", duf.betad)->required();
  audit->add_option("--leaf", duf.h, "value h of the invariant")->capture_default_str();
  audit->add_option("--t-final", duf.t_final)->check(CLI::PositiveNumber)->capture_default_str();
  audit->add_option("--amplitude", duf.amplitude, "start offset from the equilibrium")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  audit->callback([&] {
    action = [&] {
      const auto p = DuffingParams::cubic(duf.alpha, duf.omega, duf.betad);
      const auto rep = duffing_audit(p, duf.h, duf.t_final, integrator(g), duf.amplitude);
      Json payload = {{"verdict", to_string(rep.verdict)},
                      {"divergence", rep.divergence},
                      {"invariant_drift", rep.invariant_drift},
                      {"amplitude_trend", rep.amplitude_trend},
                      {"revolutions", rep.revolutions},
                      {"one_signed", rep.one_signed},
                      {"max_return_displacement", rep.max_return_displacement},
                      {"amplitudes", rep.amplitudes}};
      emit(document("report", "duffing audit",
                    {{"alpha", duf.alpha},
                     {"omega", duf.omega},
                     {"betad", duf.betad},
                     {"h", duf.h},
                     {"t_final", duf.t_final},
                     {"amplitude", duf.amplitude}},
                    g, payload),
           "", out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const NonFinite& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 1;
  }
}

}  // namespace btu
