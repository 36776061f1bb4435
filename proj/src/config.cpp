#include "diskalg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace diskalg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void only_keys(const json& j, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, val] : j.items())
    if (!ok.count(key)) fail(path + "." + key, "unknown field");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

double number_or(const json& obj, const char* key, const std::string& path,
                 double fallback) {
  return obj.contains(key) ? get_number(obj.at(key), path + "." + key) : fallback;
}

int int_or(const json& obj, const char* key, const std::string& path,
           int fallback) {
  return obj.contains(key) ? get_int(obj.at(key), path + "." + key) : fallback;
}

Complex get_complex(const json& t, const std::string& path) {
  const double re = t.contains("re") ? get_number(t.at("re"), path + ".re") : 0.0;
  const double im = t.contains("im") ? get_number(t.at("im"), path + ".im") : 0.0;
  return {re, im};
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

BiPoly parse_bipoly(const json& j, const std::string& path) {
  std::vector<BiTerm> terms;
  std::size_t i = 0;
  for (const auto& t : array_at(j, path)) {
    const std::string tp = path + "[" + std::to_string(i++) + "]";
    only_keys(t, tp, {"j", "k", "re", "im"});
    if (!t.contains("j") || !t.contains("k")) fail(tp, "needs j and k");
    const int jj = get_int(t.at("j"), tp + ".j");
    const int kk = get_int(t.at("k"), tp + ".k");
    if (jj < 0 || kk < 0) fail(tp, "exponents must be non-negative");
    terms.push_back({jj, kk, get_complex(t, tp)});
  }
  try {
    return BiPoly(terms);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

MixedPoly parse_mixed(const json& j, const std::string& path) {
  std::vector<MixedTerm> terms;
  std::size_t i = 0;
  for (const auto& t : array_at(j, path)) {
    const std::string tp = path + "[" + std::to_string(i++) + "]";
    only_keys(t, tp, {"p", "q", "re", "im"});
    if (!t.contains("p") || !t.contains("q")) fail(tp, "needs p and q");
    const int p = get_int(t.at("p"), tp + ".p");
    const int q = get_int(t.at("q"), tp + ".q");
    if (p < 0 || q < 0) fail(tp, "exponents must be non-negative");
    terms.push_back({p, q, get_complex(t, tp)});
  }
  try {
    return MixedPoly(terms);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

HomogeneousSymbol parse_symbol(const json& j, const std::string& path) {
  only_keys(j, path, {"degree", "terms"});
  if (!j.contains("degree")) fail(path + ".degree", "missing");
  const int degree = get_int(j.at("degree"), path + ".degree");
  std::vector<SymbolTerm> terms;
  if (j.contains("terms")) {
    std::size_t i = 0;
    for (const auto& t : array_at(j.at("terms"), path + ".terms")) {
      const std::string tp = path + ".terms[" + std::to_string(i++) + "]";
      only_keys(t, tp, {"k", "re", "im"});
      if (!t.contains("k")) fail(tp + ".k", "missing");
      terms.push_back({get_int(t.at("k"), tp + ".k"), get_complex(t, tp)});
    }
  }
  try {
    return HomogeneousSymbol(degree, terms);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

std::vector<double> parse_radii(const json& j, const std::string& path) {
  std::vector<double> out;
  std::size_t i = 0;
  for (const auto& x : array_at(j, path)) {
    const std::string ep = path + "[" + std::to_string(i++) + "]";
    const double r = get_number(x, ep);
    if (!(r > 0.0)) fail(ep, "must be positive");
    out.push_back(r);
  }
  if (out.empty()) fail(path, "must not be empty");
  return out;
}

void positive_int(int v, const std::string& path, int min = 1) {
  if (v < min) fail(path, "must be at least " + std::to_string(min));
}

}  // namespace

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const std::string P = "config";
  only_keys(root, P,
            {"name", "radius", "g", "F", "h", "v", "certificate", "certificate2",
             "sampling", "verify", "residual", "kallin", "degrees", "targets",
             "tolerances", "cap", "ridge", "lawson_iters", "output"});
  Config c;
  if (root.contains("name")) {
    if (!root.at("name").is_string()) fail(P + ".name", "expected a string");
    c.name = root.at("name").get<std::string>();
  }
  c.spec.radius = number_or(root, "radius", P, c.spec.radius);
  if (!(c.spec.radius > 0.0)) fail(P + ".radius", "must be positive");
  if (root.contains("g")) c.spec.g = parse_symbol(root.at("g"), P + ".g");
  if (root.contains("F")) c.spec.F = parse_bipoly(root.at("F"), P + ".F");
  if (root.contains("h")) {
    const json& h = root.at("h");
    const std::string hp = P + ".h";
    only_keys(h, hp, {"class", "terms", "symbol"});
    if (h.contains("class")) {
      const json& cls = h.at("class");
      if (cls == "o(g)")
        c.spec.h_class = SmallnessClass::LittleOofG;
      else if (cls == "o(z^2 g)")
        c.spec.h_class = SmallnessClass::LittleOofZ2G;
      else
        fail(hp + ".class", "expected \"o(g)\" or \"o(z^2 g)\"");
    }
    if (h.contains("terms")) c.spec.h = parse_mixed(h.at("terms"), hp + ".terms");
    if (h.contains("symbol"))
      c.spec.h_symbol = parse_symbol(h.at("symbol"), hp + ".symbol");
  }
  if (root.contains("v")) c.spec.direct_v = parse_mixed(root.at("v"), P + ".v");
  try {
    c.spec.validate();
  } catch (const std::invalid_argument& e) {
    fail(P + ".F", e.what());
  }
  if (root.contains("certificate"))
    c.certificate = parse_bipoly(root.at("certificate"), P + ".certificate");
  if (root.contains("certificate2"))
    c.certificate2 = parse_bipoly(root.at("certificate2"), P + ".certificate2");

  if (root.contains("sampling")) {
    const json& s = root.at("sampling");
    const std::string sp = P + ".sampling";
    only_keys(s, sp, {"n_r", "n_theta", "margin_samples"});
    c.grid.n_r = int_or(s, "n_r", sp, c.grid.n_r);
    c.grid.n_theta = int_or(s, "n_theta", sp, c.grid.n_theta);
    c.margin_samples = int_or(s, "margin_samples", sp, c.margin_samples);
    positive_int(c.grid.n_r, sp + ".n_r");
    positive_int(c.grid.n_theta, sp + ".n_theta");
    positive_int(c.margin_samples, sp + ".margin_samples", 64);
  }
  if (root.contains("verify")) {
    const json& s = root.at("verify");
    const std::string sp = P + ".verify";
    only_keys(s, sp, {"radii", "n_theta"});
    if (s.contains("radii")) c.verify_radii = parse_radii(s.at("radii"), sp + ".radii");
    c.verify_n_theta = int_or(s, "n_theta", sp, c.verify_n_theta);
    positive_int(c.verify_n_theta, sp + ".n_theta");
  }
  if (root.contains("residual")) {
    const json& s = root.at("residual");
    const std::string sp = P + ".residual";
    only_keys(s, sp, {"radii", "n_theta"});
    if (s.contains("radii"))
      c.residual_radii = parse_radii(s.at("radii"), sp + ".radii");
    c.residual_n_theta = int_or(s, "n_theta", sp, c.residual_n_theta);
    positive_int(c.residual_n_theta, sp + ".n_theta");
  }
  if (root.contains("kallin")) {
    const json& s = root.at("kallin");
    const std::string sp = P + ".kallin";
    only_keys(s, sp, {"radius", "n_r", "n_theta"});
    c.kallin_radius = number_or(s, "radius", sp, c.kallin_radius);
    if (!(c.kallin_radius > 0.0)) fail(sp + ".radius", "must be positive");
    c.kallin_n_r = int_or(s, "n_r", sp, c.kallin_n_r);
    c.kallin_n_theta = int_or(s, "n_theta", sp, c.kallin_n_theta);
    positive_int(c.kallin_n_r, sp + ".n_r");
    positive_int(c.kallin_n_theta, sp + ".n_theta");
  }
  if (root.contains("degrees")) {
    c.degrees.clear();
    std::size_t i = 0;
    for (const auto& d : array_at(root.at("degrees"), P + ".degrees")) {
      const std::string dp = P + ".degrees[" + std::to_string(i++) + "]";
      const int N = get_int(d, dp);
      if (N < 0) fail(dp, "must be non-negative");
      if (!c.degrees.empty() && N <= c.degrees.back()) fail(dp, "degrees must increase");
      c.degrees.push_back(N);
    }
    if (c.degrees.empty()) fail(P + ".degrees", "must not be empty");
  }
  if (root.contains("targets")) {
    std::size_t i = 0;
    for (const auto& t : array_at(root.at("targets"), P + ".targets")) {
      const std::string tp = P + ".targets[" + std::to_string(i++) + "]";
      only_keys(t, tp, {"name", "terms", "abs_powers"});
      Target target;
      if (!t.contains("name") || !t.at("name").is_string())
        fail(tp + ".name", "expected a string");
      target.name = t.at("name").get<std::string>();
      if (t.contains("terms")) target.poly = parse_mixed(t.at("terms"), tp + ".terms");
      if (t.contains("abs_powers")) {
        std::size_t k = 0;
        for (const auto& a : array_at(t.at("abs_powers"), tp + ".abs_powers")) {
          const std::string ap = tp + ".abs_powers[" + std::to_string(k++) + "]";
          only_keys(a, ap, {"alpha", "re", "im"});
          if (!a.contains("alpha")) fail(ap + ".alpha", "missing");
          const double alpha = get_number(a.at("alpha"), ap + ".alpha");
          if (alpha < 0.0) fail(ap + ".alpha", "must be non-negative");
          target.abs_powers.emplace_back(get_complex(a, ap), alpha);
        }
      }
      c.targets.push_back(std::move(target));
    }
  }
  if (root.contains("tolerances")) {
    const json& s = root.at("tolerances");
    const std::string sp = P + ".tolerances";
    only_keys(s, sp, {"zero_tol", "sign_tol", "newton_tol", "separation_tol"});
    c.tol.zero_tol = number_or(s, "zero_tol", sp, c.tol.zero_tol);
    c.tol.sign_tol = number_or(s, "sign_tol", sp, c.tol.sign_tol);
    c.tol.newton_tol = number_or(s, "newton_tol", sp, c.tol.newton_tol);
    c.tol.separation_tol = number_or(s, "separation_tol", sp, c.tol.separation_tol);
    for (const double v : {c.tol.zero_tol, c.tol.sign_tol, c.tol.newton_tol,
                           c.tol.separation_tol})
      if (!(v >= 0.0)) fail(sp, "tolerances must be non-negative");
  }
  c.cap = number_or(root, "cap", P, c.cap);
  if (!(c.cap > 0.0)) fail(P + ".cap", "must be positive");
  c.ridge = number_or(root, "ridge", P, c.ridge);
  if (!(c.ridge >= 0.0)) fail(P + ".ridge", "must be non-negative");
  c.lawson_iters = int_or(root, "lawson_iters", P, c.lawson_iters);
  if (c.lawson_iters < 0) fail(P + ".lawson_iters", "must be non-negative");
  if (root.contains("output")) {
    if (!root.at("output").is_string()) fail(P + ".output", "expected a string");
    c.output = root.at("output").get<std::string>();
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace diskalg
