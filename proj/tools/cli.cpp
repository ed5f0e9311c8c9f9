#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "qkflag/bethe_solver.hpp"
#include "qkflag/errors.hpp"
#include "qkflag/jfunction.hpp"
#include "qkflag/presentations.hpp"
#include "qkflag/quantum_ring.hpp"
#include "qkflag/symmetric.hpp"

namespace qkflag::cli {

namespace {

using json = nlohmann::json;

/// Usage problems found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "p/q", "-3" or a finite decimal such as "0.9".
Rational parse_number(const std::string& text) {
  static const std::regex decimal(R"(^\s*([-+]?)(\d*)\.(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, decimal)) return parse_rational(text);
  std::string den = "1" + std::string(m[3].length(), '0');
  Rational r(m[1].str() + (m[2].length() ? m[2].str() : "0") + m[3].str() + "/" + den, 10);
  r.canonicalize();
  return r;
}

std::string rational_string(const Rational& r) { return r.get_str(); }

struct Check {
  std::string name;
  bool passed = false;
  json detail;
};

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return a;
}

bool all_passed(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

class Runner {
 public:
  explicit Runner(RunConfig c) : cfg_(std::move(c)) {}

  int run(std::ostream& out) {
    json report{{"schema_version", kReportSchemaVersion},
                {"artifact_version", kArtifactVersion},
                {"command", cfg_.command},
                {"config", cfg_.to_json()}};
    std::vector<Check> checks;
    if (cfg_.command == "present") present(report, checks);
    else if (cfg_.command == "verify") verify(report, checks);
    else if (cfg_.command == "spectrum") spectrum(report, checks);
    else if (cfg_.command == "jfun") jfun(report, checks);
    else throw UsageError("unknown command '" + cfg_.command + "'");
    const bool passed = all_passed(checks);
    report["checks"] = checks_json(checks);
    report["passed"] = passed;
    emit(out, report, checks);
    return passed ? kPass : kFail;
  }

 private:
  RunConfig cfg_;

  FlagShape shape() const {
    if (cfg_.shape.empty()) throw UsageError("--shape is required");
    try {
      return FlagShape::parse(cfg_.shape);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }

  /// Λ values: ones when nonequivariant, the explicit list, or seeded draws.
  std::map<VarTag, Rational> lambda_values(const FlagShape& s) const {
    std::map<VarTag, Rational> vals;
    if (!cfg_.equivariant) return unit_equivariant_values(s);
    if (!cfg_.lambda.empty()) {
      if (static_cast<int>(cfg_.lambda.size()) != s.N())
        throw UsageError("--lambda needs " + std::to_string(s.N()) + " values");
      for (int r = 1; r <= s.N(); ++r) vals[var::Lambda(r)] = parse_number(cfg_.lambda[static_cast<std::size_t>(r - 1)]);
      return vals;
    }
    return random_equivariant_values(s, cfg_.seed.value_or(1));
  }

  std::map<VarTag, Rational> q_values(const FlagShape& s) const {
    std::map<VarTag, Rational> vals;
    if (cfg_.q.empty()) throw UsageError("--q is required");
    if (cfg_.q.size() != 1 && static_cast<int>(cfg_.q.size()) != s.n())
      throw UsageError("--q needs 1 or " + std::to_string(s.n()) + " values");
    for (int i = 1; i <= s.n(); ++i)
      vals[var::Q(i)] = parse_number(cfg_.q[cfg_.q.size() == 1 ? 0 : static_cast<std::size_t>(i - 1)]);
    return vals;
  }

  static json values_json(const std::map<VarTag, Rational>& vals) {
    json o = json::object();
    for (const auto& [v, r] : vals) o[v.name()] = rational_string(r);
    return o;
  }

  // ----------------------------------------------------------- present

  void present(json& report, std::vector<Check>& checks) {
    const FlagShape s = shape();
    const std::filesystem::path dir = cfg_.out.empty() ? "." : cfg_.out;
    std::filesystem::create_directories(dir);
    std::vector<Presentation> ps{classical_whitney(s, cfg_.equivariant), quantum_whitney(s, cfg_.equivariant),
                                 bethe_presentation(s), wronskian_presentation(s, cfg_.equivariant)};
    if (!cfg_.equivariant) ps[2] = ps[2].nonequivariant();
    json files = json::array();
    for (const auto& p : ps) {
      for (const std::string ext : {".json", ".txt"}) {
        const auto path = dir / (p.kind + ext);
        std::ofstream f(path);
        if (!f) throw ResourceError("cannot write " + path.string());
        if (ext == ".json") f << p.to_json().dump(2) << '\n';
        else f << p.to_text();
        files.push_back(path.filename().string());
      }
      checks.push_back({"written:" + p.kind, true, {{"relations", p.relations.size()}}});
    }
    report["shape"] = s.name();
    report["files"] = files;
  }

  // ------------------------------------------------------------ verify

  void verify(json& report, std::vector<Check>& checks) {
    if (!cfg_.presentation.empty()) return verify_file(report, checks);
    const FlagShape s = shape();
    report["shape"] = s.name();
    const bool eq = cfg_.equivariant;
    RingOptions o;
    o.values = lambda_values(s);
    o.trunc = TruncationPolicy{cfg_.cap};
    report["lambda"] = values_json(o.values);

    auto gate = rank_gate(quantum_whitney(s, eq), classical_whitney(s, eq), o);
    checks.push_back({"rank-gate:quantum-whitney", gate.passed, gate.to_json()});
    auto wgate = rank_gate(wronskian_presentation(s, eq), std::nullopt, o);
    checks.push_back({"rank-gate:wronskian", wgate.passed, wgate.to_json()});

    // Symbolic Λ from here on.
    const Presentation qw = quantum_whitney(s, eq);
    const auto gb = groebner(qw.relations, presentation_order(qw, qw.parameters()), TruncationPolicy{cfg_.cap});
    json det = json::array();
    bool det_ok = true;
    for (int j = 1; j <= s.n() + 1; ++j) {
      std::map<VarTag, Rational> at;
      if (!eq) at = unit_equivariant_values(s);
      auto res = wronskian_det_check(s, j, gb, at, false);
      json comps = json::array();
      for (const auto& c : res) {
        comps.push_back(c.to_string());
        det_ok = det_ok && c.is_zero();
      }
      det.push_back({{"j", j}, {"residuals", comps}});
    }
    checks.push_back({"wronskian-determinant", det_ok, det});

    auto cmp = compare_ideals(vieta_presentation(s, eq), qw);
    checks.push_back({"vieta-equals-whitney", cmp.equal(), cmp.to_json()});

    const Presentation cw = classical_whitney(s, true);
    json bad = json::array();
    for (const auto& fp : enumerate_fixed_points(s)) {
      const auto sub = whitney_localization(s, fp);
      for (std::size_t a = 0; a < cw.relations.size(); ++a)
        if (!cw.relations[a].substitute(sub).is_zero()) bad.push_back({{"point", fp.to_string()}, {"relation", a}});
    }
    checks.push_back({"classical-fixed-points", bad.empty(), {{"points", fixed_point_count(s)}, {"failures", bad}}});

    const auto specialized = bethe_equations(s, true);
    const auto factored = bethe_relations_factored(s);
    json chain = json::array();
    for (std::size_t a = 0; a < factored.size(); ++a)
      if (a >= specialized.size() || !(specialize_bethe(factored[a]) == specialized[a]))
        chain.push_back({{"i", factored[a].i}, {"j", factored[a].j}});
    checks.push_back({"specialization-chain", chain.empty() && factored.size() == specialized.size(),
                      {{"equations", factored.size()}, {"mismatches", chain}}});
  }

  void verify_file(json& report, std::vector<Check>& checks) {
    std::ifstream f(cfg_.presentation);
    if (!f) throw UsageError("cannot read " + cfg_.presentation);
    std::optional<Presentation> loaded;
    try {
      loaded = Presentation::from_json(json::parse(f));
    } catch (const std::exception& e) {
      checks.push_back({"schema", false, {{"error", e.what()}}});
      return;
    }
    const Presentation& p = *loaded;
    checks.push_back({"schema", true, {{"kind", p.kind}}});
    const FlagShape& s = p.shape;
    report["shape"] = s.name();
    report["kind"] = p.kind;
    std::optional<Presentation> reference;
    if (p.kind == "classical-whitney") reference = classical_whitney(s, p.equivariant);
    else if (p.kind == "quantum-whitney") reference = quantum_whitney(s, p.equivariant);
    else if (p.kind == "vieta") reference = vieta_presentation(s, p.equivariant);
    else if (p.kind == "wronskian") reference = wronskian_presentation(s, p.equivariant);
    else if (p.kind == "bethe") reference = p.equivariant ? bethe_presentation(s) : bethe_presentation(s).nonequivariant();
    else {
      checks.push_back({"kind", false, {{"kind", p.kind}}});
      return;
    }
    auto cmp = compare_ideals(p, *reference, {}, TruncationPolicy{cfg_.cap});
    checks.push_back({"ideal-equality:" + p.kind, cmp.equal(), cmp.to_json()});
    if (p.kind == "bethe") return;
    RingOptions o;
    o.values = lambda_values(s);
    o.trunc = TruncationPolicy{cfg_.cap};
    if (p.kind == "classical-whitney") {
      auto gb = groebner(p.specialize(o.values).relations, presentation_order(p.specialize(o.values), {}));
      long rank = -1;
      try {
        rank = static_cast<long>(gb.standard_monomials().size());
      } catch (const RankError&) {
      }
      checks.push_back({"rank-gate:" + p.kind, rank == orbit_count(s),
                        {{"expected_rank", orbit_count(s)}, {"observed_rank", rank}}});
      return;
    }
    std::optional<Presentation> classical;
    if (p.kind != "wronskian") classical = classical_whitney(s, p.equivariant);
    auto gate = rank_gate(p, classical, o);
    checks.push_back({"rank-gate:" + p.kind, gate.passed, gate.to_json()});
  }

  // ---------------------------------------------------------- spectrum

  void spectrum(json& report, std::vector<Check>& checks) {
    const FlagShape s = shape();
    auto vals = lambda_values(s);
    for (const auto& [v, r] : q_values(s)) vals[v] = r;
    report["shape"] = s.name();
    report["values"] = values_json(vals);

    HomotopyOptions h;
    h.steps = cfg_.steps;
    h.force = cfg_.force;
    std::vector<BetheSolution> sols;
    try {
      sols = solve_bethe(s, vals, h);
    } catch (const PathError& e) {
      throw PathError(std::string("spectrum ") + s.name() + ": " + e.what(), e.last_good_t());
    }
    json table = json::array();
    for (const auto& sol : orbit_representatives(sols)) table.push_back(sol.to_json(s));
    report["solutions"] = table;

    RingOptions o;
    o.mode = ScalarMode::Numeric;
    o.values = vals;
    auto ring = build_ring(quantum_whitney(s, cfg_.equivariant), o);
    report["rank"] = ring.rank();
    for (int i = 1; i <= s.n(); ++i)
      for (int l = 1; l <= s.v(i); ++l) {
        auto rep = spectrum_match(ring, sols, elementary_symmetric(s.roots(i), l), cfg_.tolerance);
        checks.push_back({"spectrum:e" + std::to_string(l) + "(P" + std::to_string(i) + ")", rep.passed,
                          rep.to_json()});
      }
  }

  // -------------------------------------------------------------- jfun

  void jfun(json& report, std::vector<Check>& checks) {
    const FlagShape s = shape();
    if (cfg_.cap < 0) throw UsageError("--cap must be nonnegative");
    const auto points = enumerate_fixed_points(s);
    if (cfg_.point < 0 || cfg_.point > static_cast<int>(points.size()))
      throw UsageError("--point must be in 0.." + std::to_string(points.size()));
    const FixedPoint fp = cfg_.point == 0 ? distinguished_point(s) : points[static_cast<std::size_t>(cfg_.point - 1)];
    report["shape"] = s.name();
    report["point"] = fp.to_string();

    json rows = json::array();
    bool bounds_ok = true;
    int failing = 0;
    for (const auto& d : DegreeVector::enumerate(s, cfg_.cap)) {
      json row;
      if (d.is_zero()) {
        row = {{"d", d.to_string()}, {"q_degree", 0}, {"formula", 0}, {"formula_matches", true}, {"passed", true}};
      } else {
        auto rep = verify_bounds(s, d);
        row = rep.to_json();
        row["passed"] = rep.passed();
        if (!rep.passed()) {
          bounds_ok = false;
          ++failing;
        }
      }
      const int at_point = q_degree(build_jd(s, d, fp));
      row["degree_at_point"] = at_point == kMinusInfinity ? json(nullptr) : json(at_point);
      rows.push_back(row);
    }
    report["rows"] = rows;
    checks.push_back({"degree-bounds", bounds_ok, {{"rows", rows.size()}, {"failing", failing}}});

    for (int i = 1; i <= s.n(); ++i)
      for (int j = 1; j <= s.v(i); ++j) {
        auto res = qde_residual(s, i, j, cfg_.cap);
        checks.push_back({"q-difference:" + std::to_string(i) + "," + std::to_string(j),
                          res.vanishes_below_cap && res.boundary_only, res.to_json()});
      }
  }

  // ------------------------------------------------------------ output

  void emit(std::ostream& out, const json& report, const std::vector<Check>& checks) const {
    std::ostringstream body;
    if (cfg_.format == "text") {
      body << "qkflag " << cfg_.command;
      if (report.contains("shape")) body << " " << report["shape"].get<std::string>();
      body << "\n";
      if (report.contains("files"))
        for (const auto& f : report["files"]) body << "  wrote " << f.get<std::string>() << "\n";
      if (report.contains("rows"))
        for (const auto& r : report["rows"])
          body << "  d=" << r["d"].get<std::string>() << " deg=" << r["q_degree"].dump()
               << " formula=" << r["formula"].dump() << (r["passed"].get<bool>() ? "" : " FAIL") << "\n";
      for (const auto& c : checks) body << (c.passed ? "PASS " : "FAIL ") << c.name << "\n";
      body << (all_passed(checks) ? "passed" : "failed") << "\n";
    } else {
      body << report.dump(2) << "\n";
    }
    if (cfg_.out.empty() || cfg_.command == "present") {
      out << body.str();
      return;
    }
    std::ofstream f(cfg_.out);
    if (!f) throw ResourceError("cannot write " + cfg_.out);
    f << body.str();
  }
};

bool set(const CLI::App* sub, const std::string& flag) {
  const auto* o = sub->get_option_no_throw(flag);
  return o && o->count() > 0;
}

}  // namespace

json RunConfig::to_json() const {
  json j{{"command", command},
         {"shape", shape},
         {"equivariant", equivariant},
         {"lambda", lambda},
         {"q", q},
         {"cap", cap},
         {"tolerance", tolerance},
         {"steps", steps},
         {"force", force},
         {"point", point},
         {"presentation", presentation},
         {"format", format}};
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

void RunConfig::merge(const json& doc) {
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  auto take = [&](const char* key, auto& field) {
    if (doc.contains(key) && !doc[key].is_null()) field = doc[key].get<std::decay_t<decltype(field)>>();
  };
  take("shape", shape);
  take("equivariant", equivariant);
  take("lambda", lambda);
  take("q", q);
  take("cap", cap);
  take("tolerance", tolerance);
  take("steps", steps);
  take("force", force);
  take("point", point);
  take("presentation", presentation);
  take("format", format);
  if (doc.contains("seed") && !doc["seed"].is_null()) seed = doc["seed"].get<std::uint64_t>();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Presentations and checks for quantum K-rings of partial flag varieties", "qkflag"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;
  std::uint64_t seed = 0;
  bool nonequivariant = false, as_json = false, as_text = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--shape", cfg.shape, "shape v1,...,vn:N");
    sub->add_flag("--nonequivariant", nonequivariant, "set every Λ to 1");
    sub->add_option("--lambda", cfg.lambda, "Λ_1..Λ_N as rationals")->delimiter(',');
    sub->add_option("--seed", seed, "draw Λ at random from (1,2) with this seed");
    sub->add_option("--cap", cfg.cap, "Novikov or degree truncation cap");
    sub->add_option("--config", config_path, "JSON config file with report config fields");
    sub->add_flag("--json", as_json, "JSON report (default)");
    sub->add_flag("--text", as_text, "plain text report");
    sub->add_option("--out", cfg.out, "report file, or output directory for present");
  };
  auto* present = app.add_subcommand("present", "write the four presentations");
  common(present);
  auto* verify = app.add_subcommand("verify", "run the structural checks on a shape or a presentation file");
  common(verify);
  verify->add_option("--presentation", cfg.presentation, "presentation JSON to check");
  auto* spectrum = app.add_subcommand("spectrum", "match Bethe roots with multiplication operators");
  common(spectrum);
  spectrum->add_option("--q", cfg.q, "Q_1..Q_n (one value is used for all)")->delimiter(',');
  spectrum->add_option("--tolerance", cfg.tolerance, "relative match tolerance");
  spectrum->add_option("--steps", cfg.steps, "continuation schedule length");
  spectrum->add_flag("--force", cfg.force, "allow |Q| beyond the safety radius");
  auto* jfun = app.add_subcommand("jfun", "J-function degree, pole and q-difference sweep");
  common(jfun);
  jfun->add_option("--point", cfg.point, "fixed point for the restricted degree column");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }
  auto* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();

  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw UsageError("cannot read config " + config_path);
      json doc;
      try {
        doc = json::parse(f);
      } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      // Flags on the command line win over the file.
      RunConfig cli = cfg;
      cfg.merge(doc);
      if (set(sub, "--shape")) cfg.shape = cli.shape;
      if (set(sub, "--lambda")) cfg.lambda = cli.lambda;
      if (set(sub, "--cap")) cfg.cap = cli.cap;
      if (set(sub, "--q")) cfg.q = cli.q;
      if (set(sub, "--tolerance")) cfg.tolerance = cli.tolerance;
      if (set(sub, "--steps")) cfg.steps = cli.steps;
      if (set(sub, "--force")) cfg.force = cli.force;
      if (set(sub, "--point")) cfg.point = cli.point;
      if (set(sub, "--presentation")) cfg.presentation = cli.presentation;
      if (set(sub, "--out")) cfg.out = cli.out;
    }
    if (nonequivariant) cfg.equivariant = false;
    if (set(sub, "--seed")) cfg.seed = seed;
    if (as_json && as_text) throw UsageError("--json and --text are exclusive");
    if (as_text) cfg.format = "text";
    if (as_json) cfg.format = "json";
    if (cfg.format != "json" && cfg.format != "text") throw UsageError("format must be json or text");
    if (!cfg.lambda.empty() && cfg.seed) throw UsageError("--lambda and --seed are exclusive");
    return Runner(cfg).run(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DegeneracyError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "refused: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kResource;
  }
}

}  // namespace qkflag::cli
