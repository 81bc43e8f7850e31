// qfold: exact computations on quasifold groupoids, affine bibundles,
// irrational tori, and the flat-flow boundary example.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qfold/json_io.hpp"
#include "qfold/lift.hpp"

namespace {

using namespace qfold;

struct RunConfig {
  int bound = 6;
  int samples = 100;
  unsigned seed = 0;
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--bound", cfg.bound, "word-search bound")->check(CLI::PositiveNumber);
  cmd->add_option("--samples", cfg.samples, "sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "sampling seed");
  cmd->add_option("--tol", cfg.tol, "numeric tolerance");
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  cmd->add_option("--format", cfg.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
}

json config_echo(const RunConfig& cfg) {
  return json{{"bound", cfg.bound},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"tol", cfg.tol},
              {"format", cfg.format}};
}

void emit(const RunConfig& cfg, json report) {
  report["config"] = config_echo(cfg);
  std::ostringstream text;
  if (cfg.format == "text") {
    std::function<void(const std::string&, const json&)> walk = [&](const std::string& prefix,
                                                                    const json& j) {
      if (j.is_object() || j.is_array()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
          std::string key = j.is_object() ? it.key() : std::to_string(it - j.begin());
          walk(prefix.empty() ? key : prefix + "." + key, it.value());
        }
      } else {
        text << prefix << " = " << j.dump() << "\n";
      }
    };
    walk("", report);
  } else {
    text << report.dump(2) << "\n";
  }
  if (cfg.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(cfg.out);
    f << text.str();
  }
}

json read_json_input(const std::string& path) {
  if (path == "-") return json::parse(std::cin);
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return json::parse(f);
}

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return 0;
    case Verdict::No:
      return 1;
    case Verdict::Unknown:
      return 3;
  }
  return 2;
}

int cmd_torus(const RunConfig& cfg, const std::string& alpha_text, const std::string& beta_text,
              bool with_bibundle) {
  auto alpha = QuadraticIrrational::parse(alpha_text);
  auto beta = QuadraticIrrational::parse(beta_text);
  MoritaResult r = morita_equivalent(alpha, beta);
  json report{{"alpha", alpha.str()},
              {"beta", beta.str()},
              {"equivalent", r.equivalent},
              {"witness", r.witness ? witness_to_json(*r.witness) : json(nullptr)},
              {"cf", json{{"alpha", cf_to_json(r.cf_alpha)}, {"beta", cf_to_json(r.cf_beta)}}}};
  if (r.equivalent && with_bibundle) {
    LiftFamily p = lift_witness_to_bibundle(alpha, beta, *r.witness);
    json checks = json::array();
    auto img = p.orbit_image(0, {Scalar(0L)}, cfg.bound);
    checks.push_back(json{{"name", "orbit-map-defined-at-0"},
                          {"pass", img.verdict == Verdict::Yes}});
    checks.push_back(json{{"name", "classify"},
                          {"value", bibundle_class_name(classify(p, cfg.bound, 10, cfg.seed))}});
    report["bibundle"] = json{{"family", bibundle_to_json(p)}, {"checks", checks}};
  }
  emit(cfg, report);
  return r.equivalent ? 0 : 1;
}

int cmd_orbit(const RunConfig& cfg, const std::string& atlas_path, int i, const std::string& x,
              int j, const std::string& y) {
  Atlas atlas = atlas_from_json(read_json_input(atlas_path));
  Vec xv, yv;
  for (auto [vec, text] : {std::pair{&xv, x}, std::pair{&yv, y}}) {
    json parsed = json::parse(text, nullptr, false);
    if (!parsed.is_discarded() && parsed.is_array())
      *vec = vec_from_json(parsed);
    else
      vec->push_back(Scalar::parse(text));
  }
  AtlasHandle ha = atlas.pi(i, xv);
  AtlasHandle hb = atlas.pi(j, yv);
  Verdict v = atlas.pi_equal(ha, hb, cfg.bound);
  emit(cfg, json{{"verdict", verdict_name(v)},
                 {"lhs", json{{"chart", i}, {"point", vec_to_json(xv)}}},
                 {"rhs", json{{"chart", j}, {"point", vec_to_json(yv)}}}});
  return exit_code_for(v);
}

int cmd_bibundle(const RunConfig& cfg, const std::string& op, const std::vector<std::string>& files,
                 const std::string& u_text, const std::string& v_text) {
  auto need = [&](size_t k) {
    if (files.size() != k)
      throw CLI::ValidationError("bibundle " + op + " needs " + std::to_string(k) + " input file(s)");
  };
  if (op == "compose") {
    need(2);
    LiftFamily p = bibundle_from_json(read_json_input(files[0]));
    LiftFamily q = bibundle_from_json(read_json_input(files[1]));
    LiftFamily pq = compose(p, q, cfg.bound);
    // Functoriality spot check: |Q o P| = |Q| o |P| on sampled decided orbits.
    int agree = 0, tested = 0;
    for (const auto& l : p.lifts())
      for (const auto& x : sample_points(l.dom, std::max(1, cfg.samples / 10), cfg.seed)) {
        auto direct = pq.orbit_image(l.src_chart, x, cfg.bound);
        auto ip = p.orbit_image(l.src_chart, x, cfg.bound);
        if (direct.verdict != Verdict::Yes || ip.verdict != Verdict::Yes) continue;
        auto iq = q.orbit_image(ip.chart, ip.rep, cfg.bound);
        if (iq.verdict != Verdict::Yes) continue;
        ++tested;
        if (pq.target().orbit_equal(direct.chart, direct.rep, iq.chart, iq.rep, cfg.bound) ==
            Verdict::Yes)
          ++agree;
      }
    emit(cfg, json{{"result", bibundle_to_json(pq)},
                   {"functoriality", json{{"tested", tested}, {"agree", agree},
                                          {"pass", tested == agree}}}});
    return tested == agree ? 0 : 1;
  }
  if (op == "restrict") {
    need(1);
    LiftFamily p = bibundle_from_json(read_json_input(files[0]));
    OpenBoxSet u = u_text.empty() ? OpenBoxSet::full(p.source().dim())
                                  : boxset_from_json(json::parse(u_text));
    OpenBoxSet v = v_text.empty() ? OpenBoxSet::full(p.target().dim())
                                  : boxset_from_json(json::parse(v_text));
    emit(cfg, json{{"result", bibundle_to_json(restrict(p, u, v))}});
    return 0;
  }
  if (op == "classify") {
    need(1);
    LiftFamily p = bibundle_from_json(read_json_input(files[0]));
    BibundleClass c = classify(p, cfg.bound, std::max(1, cfg.samples / 10), cfg.seed);
    emit(cfg, json{{"class", bibundle_class_name(c)}});
    return 0;
  }
  if (op == "iso") {
    need(2);
    LiftFamily p = bibundle_from_json(read_json_input(files[0]));
    LiftFamily q = bibundle_from_json(read_json_input(files[1]));
    IsoResult r = isomorphic(p, q, std::max(2, cfg.samples / 10), cfg.bound, cfg.seed);
    emit(cfg, json{{"verdict", verdict_name(r.verdict)},
                   {"detail", r.detail},
                   {"witness", r.witness ? vec_to_json(*r.witness) : json(nullptr)}});
    return exit_code_for(r.verdict);
  }
  throw CLI::ValidationError("unknown bibundle op: " + op);
}

int cmd_nonexample(const RunConfig& cfg, const std::string& subcheck, int order, double scale,
                   double x, int k) {
  namespace ne = qfold::nonexample;
  double acc = std::min(cfg.tol, 1e-10);
  if (subcheck == "jet") {
    auto r = ne::jet_flatness_check(order, scale, acc);
    emit(cfg, jet_report_to_json(r));
    return r.pass ? 0 : 1;
  }
  if (subcheck == "orbits") {
    std::vector<double> samples;
    if (x != 0.0) {
      samples = {x};
    } else {
      for (int i = 1; i <= 10; ++i) samples.push_back(0.2 * i);
      for (int i = 1; i <= 10; ++i) samples.push_back(-0.2 * i);
    }
    auto r = ne::orbit_coincidence(samples, k, acc, cfg.tol);
    emit(cfg, orbit_coincidence_to_json(r));
    return r.pass ? 0 : 1;
  }
  if (subcheck == "recovery") {
    auto r = ne::recovery_failure_demo(-0.5, 0.5, k, acc);
    emit(cfg, recovery_failure_to_json(r));
    return r.matched ? 1 : 0;
  }
  if (subcheck == "flow") {
    double psi = ne::flow_psi(x, acc);
    double oracle = x + ne::flow_displacement_rk4(x, 1.0, 4096);
    json report{{"x", x},
                {"psi", psi},
                {"oracle_rk4", oracle},
                {"difference", std::abs(psi - oracle)},
                {"pass", std::abs(psi - oracle) <= 1e-10}};
    emit(cfg, report);
    return std::abs(psi - oracle) <= 1e-10 ? 0 : 1;
  }
  throw CLI::ValidationError("unknown nonexample subcheck: " + subcheck);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact quasifold-groupoid computations"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* torus = app.add_subcommand("torus", "decide Morita equivalence of irrational tori");
  std::string alpha_text, beta_text;
  bool with_bibundle = false;
  torus->add_option("alpha", alpha_text, "e.g. \"sqrt(2)\"")->required();
  torus->add_option("beta", beta_text, "e.g. \"1+sqrt(2)\"")->required();
  torus->add_flag("--bibundle", with_bibundle, "lift the witness to a bibundle and check it");
  add_common(torus, cfg);

  auto* orbit = app.add_subcommand("orbit", "compare two points of an atlas orbit space");
  std::string atlas_path, x_text, y_text;
  int chart_i = 0, chart_j = 0;
  orbit->add_option("--atlas", atlas_path, "atlas JSON file (- for stdin)")->required();
  orbit->add_option("--i", chart_i, "chart of the first point")->required();
  orbit->add_option("--x", x_text, "first point (scalar or JSON array)")->required();
  orbit->add_option("--j", chart_j, "chart of the second point")->required();
  orbit->add_option("--y", y_text, "second point")->required();
  add_common(orbit, cfg);

  auto* bib = app.add_subcommand("bibundle", "bibundle algebra: compose, restrict, classify, iso");
  std::string bib_op;
  std::vector<std::string> bib_files;
  std::string u_text, v_text;
  bib->add_option("op", bib_op, "compose | restrict | classify | iso")->required();
  bib->add_option("files", bib_files, "bibundle JSON file(s), - for stdin");
  bib->add_option("--U", u_text, "restriction box set for the source (JSON)");
  bib->add_option("--V", v_text, "restriction box set for the target (JSON)");
  add_common(bib, cfg);

  auto* ne = app.add_subcommand("nonexample", "flat-flow boundary example checks");
  std::string subcheck;
  int order = 4, krange = 3;
  double scale = 0.1, x_value = 0.0;
  ne->add_option("check", subcheck, "jet | orbits | recovery | flow")->required();
  ne->add_option("--order", order, "max jet order (jet)");
  ne->add_option("--scale", scale, "stencil width (jet)");
  ne->add_option("--x", x_value, "sample point (orbits, flow)");
  ne->add_option("--k", krange, "iterate range (orbits, recovery)");
  add_common(ne, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (torus->parsed()) return cmd_torus(cfg, alpha_text, beta_text, with_bibundle);
    if (orbit->parsed()) return cmd_orbit(cfg, atlas_path, chart_i, x_text, chart_j, y_text);
    if (bib->parsed()) return cmd_bibundle(cfg, bib_op, bib_files, u_text, v_text);
    if (ne->parsed()) return cmd_nonexample(cfg, subcheck, order, scale, x_value, krange);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
