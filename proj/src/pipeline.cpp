#include "diskalg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "diskalg/approx.hpp"
#include "diskalg/condition.hpp"
#include "diskalg/geometry.hpp"

namespace diskalg {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Evidence: return "evidence";
    case Verdict::Deferred: return "deferred";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
  }
  return "fail";
}

StageResult StageResult::checked(std::string name, CheckKind kind, bool ok,
                                 json details) {
  Verdict v = Verdict::Fail;
  if (ok) v = kind == CheckKind::Certified ? Verdict::Pass : Verdict::Evidence;
  return StageResult(std::move(name), kind, v, std::move(details));
}

StageResult StageResult::skipped(std::string name, std::string reason) {
  return StageResult(std::move(name), CheckKind::Sampled, Verdict::Skipped,
                     json{{"reason", std::move(reason)}});
}

StageResult StageResult::deferred(std::string name, CheckKind kind,
                                  json details) {
  return StageResult(std::move(name), kind, Verdict::Deferred, std::move(details));
}

json StageResult::to_json() const {
  return {{"stage", name_},
          {"kind", kind_ == CheckKind::Certified ? "certified" : "sampled"},
          {"verdict", to_string(verdict_)},
          {"details", details_}};
}

int SummaryReport::exit_code() const {
  return std::any_of(stages.begin(), stages.end(),
                     [](const StageResult& s) { return s.verdict() == Verdict::Fail; })
             ? 1
             : 0;
}

json SummaryReport::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["config"] = config_name;
  j["stages"] = json::array();
  for (const auto& s : stages) j["stages"].push_back(s.to_json());
  j["files"] = files;
  j["exit_code"] = exit_code();
  return j;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{
      "check", "margin", "verify", "combine", "separate",
      "kallin", "residual", "approx", "study"};
  return names;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

json cjson(Complex c) { return json::array({c.real(), c.imag()}); }

// JSON has no infinity; callers see null.
json rjson(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Context {
  const Config& cfg;
  std::filesystem::path out_dir;
  RunOptions opts;
  SummaryReport report;
  std::optional<CoefficientVerdict> verdict;
  std::optional<BiPoly> certificate;
  std::string certificate_source;

  void write(const std::string& name, const std::string& content) {
    write_file_atomic(out_dir / name, content);
    if (std::find(report.files.begin(), report.files.end(), name) ==
        report.files.end())
      report.files.push_back(name);
  }
};

const CoefficientVerdict& coefficient_verdict(Context& ctx) {
  if (!ctx.verdict) ctx.verdict = classify(*ctx.cfg.spec.g, ctx.cfg.margin_samples);
  return *ctx.verdict;
}

// User-supplied certificate first, else the two-term construction.
const std::optional<BiPoly>& resolve_certificate(Context& ctx) {
  if (ctx.certificate) return ctx.certificate;
  if (ctx.cfg.certificate) {
    ctx.certificate = *ctx.cfg.certificate;
    ctx.certificate_source = "config";
  } else if (ctx.cfg.spec.g && ctx.cfg.spec.g->degree() % 2 == 0) {
    const auto& v = coefficient_verdict(ctx);
    if (v.passes_any()) {
      ctx.certificate = build_certificate(*ctx.cfg.spec.g, *v.pivot).p;
      ctx.certificate_source = "built";
    }
  }
  return ctx.certificate;
}

StageResult stage_check(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (!cfg.spec.g) return StageResult::skipped("check", "no symbol g configured");
  const auto& g = *cfg.spec.g;
  if (g.degree() % 2 != 0)
    return StageResult::checked("check", CheckKind::Certified, false,
                                {{"message", "symbol degree is odd"}});
  const auto& v = coefficient_verdict(ctx);
  json d;
  d["g"] = g.to_string();
  d["pivot"] = v.pivot ? json(*v.pivot) : json(nullptr);
  d["passes"] = {{"A", v.passes_A}, {"B", v.passes_B}, {"C", v.passes_C}};
  d["margins"] = {{"A", rjson(v.margin_A)}, {"B", rjson(v.margin_B)},
                  {"C", rjson(v.margin_C)}};
  d["strongest"] = v.strongest();
  d["c"] = json::array();
  for (const auto& cn : v.c) d["c"].push_back(cjson(cn));
  if (v.passes_any()) {
    const Certificate cert = build_certificate(g, *v.pivot);
    d["certificate"] = cert.p.to_string();
    d["alpha"] = cjson(cert.alpha);
    d["certificate_degree"] = cert.s_degree;
    d["complex_symmetric_deviation"] = is_complex_symmetric(cert.p).deviation;
  } else {
    d["message"] = "no sufficient condition applies";
    json zeros = json::array();
    for (const double t : symbol_zeros_on_circle(g, cfg.margin_samples)) zeros.push_back(t);
    d["zeros_on_circle"] = zeros;
  }
  if (cfg.certificate) {
    d["user_certificate"] = cfg.certificate->to_string();
    try {
      d["user_certificate_symmetric_deviation"] =
          is_complex_symmetric(*cfg.certificate).deviation;
    } catch (const std::invalid_argument& e) {
      d["user_certificate_note"] = e.what();
    }
  }
  if (!v.passes_any() && cfg.certificate2) {
    d["note"] = "coefficient tests inconclusive; the combine stage decides";
    return StageResult::deferred("check", CheckKind::Certified, d);
  }
  return StageResult::checked("check", CheckKind::Certified, v.passes_any(), d);
}

StageResult stage_margin(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (!cfg.spec.g) return StageResult::skipped("margin", "no symbol g configured");
  const auto& cert = resolve_certificate(ctx);
  if (!cert) return StageResult::skipped("margin", "no certificate available");
  MarginTrace f0;
  try {
    f0 = margin_trace(*cert, *cfg.spec.g, cfg.margin_samples);
  } catch (const std::invalid_argument& e) {
    return StageResult::checked("margin", CheckKind::Certified, false,
                                {{"message", e.what()}});
  }
  std::optional<MarginTrace> f1;
  if (cfg.certificate2) {
    try {
      f1 = margin_trace(*cfg.certificate2, *cfg.spec.g, cfg.margin_samples);
    } catch (const std::invalid_argument&) {
    }
  }
  std::string csv = "theta,f0,f1\n";
  for (std::size_t i = 0; i < f0.values.size(); ++i)
    csv += format_real(f0.thetas[i]) + "," + format_real(f0.values[i]) + "," +
           (f1 ? format_real(f1->values[i]) : std::string("nan")) + "\n";
  ctx.write("margin_trace.csv", csv);

  const auto pos = check_strict_positivity(f0);
  json d{{"certificate", cert->to_string()},
         {"certificate_source", ctx.certificate_source},
         {"samples", cfg.margin_samples},
         {"sample_min", *std::min_element(f0.values.begin(), f0.values.end())},
         {"lipschitz_bound", f0.lipschitz_bound},
         {"certified_min", pos.certified_min}};
  if (!pos.positive && cfg.certificate2) {
    d["note"] = "not strictly positive; the combine stage decides";
    return StageResult::deferred("margin", CheckKind::Certified, d);
  }
  return StageResult::checked("margin", CheckKind::Certified, pos.positive, d);
}

StageResult stage_verify(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (!cfg.spec.g) return StageResult::skipped("verify", "no symbol g configured");
  const auto& cert = resolve_certificate(ctx);
  if (!cert) return StageResult::skipped("verify", "no certificate available");
  std::vector<double> offsets;
  if (ctx.opts.seed) {
    std::mt19937_64 rng(*ctx.opts.seed);
    std::uniform_real_distribution<double> u(
        0.0, 2.0 * std::numbers::pi / cfg.verify_n_theta);
    for (std::size_t i = 0; i < cfg.verify_radii.size(); ++i) offsets.push_back(u(rng));
  }
  const auto& g = *cfg.spec.g;
  const auto perts = standard_perturbations();
  // With a second certificate the two are added; the scale t^2 of the disk
  // plays the role of the combination weight.
  const BiPoly p = cfg.certificate2 ? *cert + *cfg.certificate2 : *cert;
  const int order = cfg.spec.h_class == SmallnessClass::LittleOofZ2G ? 3 : 1;
  const auto ev = verify_polynomial_condition(
      p, [&g](Complex z) { return g(z); }, cfg.verify_radii, cfg.verify_n_theta,
      perts, offsets, 64, order);
  json d{{"certificate", p.to_string()},
         {"perturbation_order", order},
         {"reduced_to_odd_part", ev.reduced_to_odd_part},
         {"safe_radius", ev.safe_radius},
         {"perturbations", json::array()},
         {"per_radius", json::array()},
         {"violations", json::array()}};
  for (const auto c : perts) d["perturbations"].push_back(cjson(c));
  for (const auto& r : ev.per_radius)
    d["per_radius"].push_back({{"radius", r.radius},
                               {"min_plus", rjson(r.min_plus)},
                               {"min_minus", rjson(r.min_minus)},
                               {"ok", r.ok}});
  for (const auto& v : ev.violations)
    d["violations"].push_back({{"z", cjson(v.z)},
                               {"perturbation", cjson(v.perturbation)},
                               {"branch", v.branch},
                               {"value", v.value}});
  return StageResult::checked("verify", CheckKind::Sampled, ev.ok(), d);
}

StageResult stage_combine(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (!cfg.spec.g) return StageResult::skipped("combine", "no symbol g configured");
  if (!cfg.certificate2)
    return StageResult::skipped("combine", "no second certificate configured");
  const auto& cert = resolve_certificate(ctx);
  if (!cert) return StageResult::skipped("combine", "no certificate available");
  try {
    const auto f0 = margin_trace(*cert, *cfg.spec.g, cfg.margin_samples);
    const auto f1 = margin_trace(*cfg.certificate2, *cfg.spec.g, cfg.margin_samples);
    std::string csv = "theta,f0,f1\n";
    for (std::size_t i = 0; i < f0.values.size(); ++i)
      csv += format_real(f0.thetas[i]) + "," + format_real(f0.values[i]) + "," +
             format_real(f1.values[i]) + "\n";
    ctx.write("margin_trace.csv", csv);
    const auto r = combine_certificates(f0, f1, cfg.tol.zero_tol, cfg.cap);
    json U = json::array();
    for (const auto& iv : r.U) U.push_back({iv.begin, iv.end});
    return StageResult::checked(
        "combine", CheckKind::Certified, true,
        {{"delta", r.delta},
         {"U", U},
         {"epsilon", rjson(r.epsilon)},
         {"lambda0", r.lambda0},
         {"verified_floor", r.verified_floor},
         {"strict_regime", r.strict_regime},
         {"combined_certificate", (*cert + *cfg.certificate2).to_string()},
         {"radius_bound", std::sqrt(r.lambda0)}});
  } catch (const std::exception& e) {
    return StageResult::checked("combine", CheckKind::Certified, false,
                                {{"message", e.what()}});
  }
}

StageResult stage_separate(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto pts = sample_disk(cfg.spec.radius, cfg.grid.n_r, cfg.grid.n_theta);
  const auto rep = separation_check(cfg.spec, pts, cfg.tol.separation_tol);
  json d{{"kappa", rep.kappa},
         {"min_normalized_gap", rjson(rep.min_normalized_gap)},
         {"worst_z", cjson(rep.worst_z)},
         {"violation_count", rep.violations.size()}};
  if (!rep.passed)
    d["message"] = "separation numerically violated at z = " +
                   format_complex(rep.violations.front());
  return StageResult::checked("separate", CheckKind::Sampled, rep.passed, d);
}

StageResult stage_residual(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.spec.has_direct() || !cfg.spec.g)
    return StageResult::skipped("residual", "needs the zbar + f + g + h form");
  std::vector<ResidualRow> rows;
  try {
    rows = residual_trace(cfg.spec, cfg.residual_radii, cfg.residual_n_theta,
                          cfg.tol.newton_tol);
  } catch (const std::domain_error& e) {
    return StageResult::checked("residual", CheckKind::Sampled, false,
                                {{"message", e.what()}});
  }
  std::string csv = "r,ratio1,ratio2\n";
  for (const auto& r : rows)
    csv += format_real(r.radius) + "," + format_real(r.ratio1) + "," +
           format_real(r.ratio2) + "\n";
  ctx.write("residuals.csv", csv);

  auto sorted = rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.radius > b.radius; });
  // Ratios below the rounding floor count as exact zeros.
  bool shrinking = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double cap1 = std::max(sorted[i - 1].ratio1, sorted[i].floor);
    const double cap2 = std::max(sorted[i - 1].ratio2, sorted[i].floor);
    if (sorted[i].ratio1 > cap1 || sorted[i].ratio2 > cap2) shrinking = false;
  }
  const auto small = check_h_smallness(cfg.spec);
  json d{{"shrinking", shrinking},
         {"h_class", cfg.spec.h_class == SmallnessClass::LittleOofG ? "o(g)" : "o(z^2 g)"},
         {"h_ratio_decreasing", small.decreasing},
         {"rows", json::array()}};
  for (const auto& r : rows)
    d["rows"].push_back({{"r", r.radius},
                         {"ratio1", r.ratio1},
                         {"ratio2", r.ratio2},
                         {"floor", r.floor}});
  return StageResult::checked("residual", CheckKind::Sampled,
                              shrinking && small.decreasing, d);
}

json probe_json(const KallinReport& r) {
  json d{{"min_margin1", rjson(r.min_margin1)},
         {"min_margin2", rjson(r.min_margin2)},
         {"violation_count", r.violations.size()},
         {"spurious_zero_count", r.zero_points.size()}};
  if (!r.violations.empty()) {
    const auto& v = r.violations.front();
    d["first_violation"] = {{"set", v.set},
                            {"point", {cjson(v.point.first), cjson(v.point.second)}},
                            {"normalized_value", v.normalized_value}};
  }
  return d;
}

StageResult stage_kallin(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.spec.has_direct() || !cfg.spec.g)
    return StageResult::skipped("kallin", "needs the zbar + f + g + h form");
  GeneratorSpec spec = cfg.spec;
  spec.radius = cfg.kallin_radius;
  const auto pts = sample_disk(cfg.kallin_radius, cfg.kallin_n_r, cfg.kallin_n_theta);
  json d;
  bool ok = true;

  // Product probe zeta1 zeta2 separates D1 u D2 from D3 u D4.
  const auto disks = four_disks(spec, pts);
  std::vector<PointPair> s1 = disks.D1, s2 = disks.D3;
  s1.insert(s1.end(), disks.D2.begin(), disks.D2.end());
  s2.insert(s2.end(), disks.D4.begin(), disks.D4.end());
  const BiPoly product{{1, 1, 1.0}};
  const auto pr = kallin_probe(product, s1, s2, -std::numbers::pi / 2, cfg.tol.sign_tol);
  d["product_probe"] = probe_json(pr);
  ok = ok && pr.passed;

  const auto& cert = resolve_certificate(ctx);
  if (cert) {
    try {
      const BiPoly p = cfg.certificate2 ? *cert + *cfg.certificate2 : *cert;
      const auto sheets = straighten(spec, pts, cfg.tol.newton_tol);
      const auto cr = kallin_probe(p, sheets.E1, sheets.E2, 0.0, cfg.tol.sign_tol);
      d["certificate_probe"] = probe_json(cr);
      d["certificate"] = p.to_string();
      ok = ok && cr.passed;
    } catch (const std::domain_error& e) {
      d["certificate_probe"] = {{"message", e.what()}};
      ok = false;
    }
  } else {
    d["certificate_probe"] = {{"message", "no certificate available"}};
  }
  d["radius"] = cfg.kallin_radius;
  return StageResult::checked("kallin", CheckKind::Sampled, ok, d);
}

std::vector<Target> default_targets() {
  return {Target{"conj(z)", MixedPoly{{0, 1, 1.0}}, {}},
          Target{"conj(z)^2", MixedPoly{{0, 2, 1.0}}, {}}};
}

StageResult stage_approx(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto targets = cfg.targets.empty() ? default_targets() : cfg.targets;
  std::vector<int> degrees = cfg.degrees;
  if (ctx.opts.max_degree) {
    std::erase_if(degrees, [&](int N) { return N > *ctx.opts.max_degree; });
    if (degrees.empty()) degrees.push_back(*ctx.opts.max_degree);
  }
  const GeneratorSpec& spec = cfg.spec;
  const Sampler v = [&spec](Complex z) { return spec.v(z); };
  StudyResult study;
  try {
    study = convergence_study(v, spec.radius, targets, degrees, cfg.grid, cfg.ridge,
                              cfg.lawson_iters);
  } catch (const std::runtime_error& e) {
    return StageResult::checked("approx", CheckKind::Sampled, false,
                                {{"message", e.what()}});
  }
  std::string csv = "target,N,sup_residual\n";
  for (const auto& r : study.rows)
    csv += r.target + "," + std::to_string(r.degree) + "," +
           format_real(r.sup_residual) + "\n";
  ctx.write("convergence.csv", csv);

  json per_target = json::array();
  for (const auto& [name, monotone] : study.monotone) {
    double first = 0.0, last = 0.0;
    bool seen = false;
    for (const auto& r : study.rows)
      if (r.target == name) {
        if (!seen) first = r.sup_residual;
        seen = true;
        last = r.sup_residual;
      }
    per_target.push_back({{"target", name},
                          {"monotone", monotone},
                          {"first", first},
                          {"last", last},
                          {"reduction", first > 0.0 ? json(last / first) : json(nullptr)}});
  }
  // Convergence or stagnation is numerical evidence either way.
  return StageResult::checked("approx", CheckKind::Sampled, true,
                              {{"targets", per_target}, {"degrees", degrees}});
}

}  // namespace

SummaryReport execute(const std::string& subcommand, const Config& cfg,
                      const std::filesystem::path& out_dir,
                      const RunOptions& opts) {
  Context ctx{cfg, out_dir, opts, {}, {}, {}, {}};
  ctx.report.subcommand = subcommand;
  ctx.report.config_name = cfg.name;
  auto& st = ctx.report.stages;
  auto need_g = [&] {
    if (!cfg.spec.g) throw ConfigError("config.g: required by " + subcommand);
  };

  if (subcommand == "check") {
    need_g();
    st.push_back(stage_check(ctx));
  } else if (subcommand == "margin") {
    need_g();
    st.push_back(stage_margin(ctx));
  } else if (subcommand == "verify") {
    need_g();
    st.push_back(stage_verify(ctx));
  } else if (subcommand == "combine") {
    need_g();
    if (!cfg.certificate2)
      throw ConfigError("config.certificate2: required by combine");
    st.push_back(stage_combine(ctx));
  } else if (subcommand == "separate") {
    st.push_back(stage_separate(ctx));
  } else if (subcommand == "kallin") {
    if (cfg.spec.has_direct()) throw ConfigError("config.v: kallin needs w, not v");
    need_g();
    st.push_back(stage_kallin(ctx));
  } else if (subcommand == "residual") {
    if (cfg.spec.has_direct()) throw ConfigError("config.v: residual needs w, not v");
    need_g();
    st.push_back(stage_residual(ctx));
  } else if (subcommand == "approx") {
    st.push_back(stage_approx(ctx));
  } else if (subcommand == "study") {
    st.push_back(stage_check(ctx));
    st.push_back(stage_margin(ctx));
    st.push_back(stage_verify(ctx));
    st.push_back(stage_combine(ctx));
    st.push_back(stage_separate(ctx));
    st.push_back(stage_residual(ctx));
    st.push_back(stage_kallin(ctx));
    st.push_back(stage_approx(ctx));
  } else {
    throw ConfigError("unknown subcommand: " + subcommand);
  }

  ctx.report.files.push_back("summary.json");
  write_file_atomic(out_dir / "summary.json", ctx.report.to_json().dump(2) + "\n");
  return ctx.report;
}

int run(const std::string& subcommand, const RunOptions& opts, std::ostream& log) {
  try {
    const Config cfg = load_config(opts.config);
    const auto out_dir = opts.out.value_or(cfg.output);
    const auto report = execute(subcommand, cfg, out_dir, opts);
    for (const auto& s : report.stages) {
      log << s.name() << ": " << to_string(s.verdict());
      if (s.details().contains("message"))
        log << " (" << s.details()["message"].get<std::string>() << ")";
      if (s.details().contains("certificate") && s.details()["certificate"].is_string())
        log << " certificate " << s.details()["certificate"].get<std::string>();
      log << "\n";
      if (s.details().contains("zeros_on_circle"))
        log << "  zeros of g on the unit circle: " << s.details()["zeros_on_circle"].dump()
            << "\n";
    }
    log << "summary: " << (out_dir / "summary.json").string() << "\n";
    return report.exit_code();
  } catch (const ConfigError& e) {
    log << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace diskalg
