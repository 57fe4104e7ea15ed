#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hypdc/conformal.hpp"
#include "hypdc/errors.hpp"
#include "hypdc/io.hpp"
#include "hypdc/mesh.hpp"
#include "hypdc/svg.hpp"
#include "hypdc/verifier.hpp"

namespace hypdc::cli {

namespace {

using nlohmann::json;

// Raised for bad flag values that CLI11 cannot reject on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void diagnose(std::ostream& err, const char* kind, const std::string& message, json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  err << extra.dump() << '\n';
}

struct GenArgs {
  int rings = 1;
  double edge = 0.01;
  std::string out;
};

struct CheckArgs {
  std::string mesh;
  bool delaunay = false;
  bool embedding = false;
  bool min_angle = false;
};

struct ConformalArgs {
  std::string mesh;
  std::string factors;
  std::string mode;
  std::string out;
};

struct SolveArgs {
  std::string mesh;
  double pin = 0.0;
  std::string init = "zero";
  std::string out;
};

struct VerifyArgs {
  std::string suite;
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  double epsilon = 0.5;
  unsigned threads = 0;
};

struct RenderArgs {
  std::string mesh;
  std::string out;
  bool companion = false;
};

int do_gen(const GenArgs& a, std::ostream& out) {
  const Patch patch = gen_regular_patch(a.rings, a.edge);
  write_file(a.out, write_mesh_json(patch.mesh, patch.map));
  out << json{{"vertices", patch.mesh.vertices().size()},
              {"edges", patch.mesh.edges().size()},
              {"faces", patch.mesh.faces().size()}}
             .dump()
      << '\n';
  return kOk;
}

int do_check(CheckArgs a, std::ostream& out) {
  const MeshFile file = parse_mesh_json(read_file(a.mesh));
  if (!a.delaunay && !a.embedding && !a.min_angle) a.delaunay = a.embedding = a.min_angle = true;

  json report;
  report["vertices"] = file.mesh.vertices().size();
  report["edges"] = file.mesh.edges().size();
  report["faces"] = file.mesh.faces().size();
  std::int64_t violations = 0;
  if (a.delaunay) {
    const DelaunayReport d = is_delaunay(file.mesh, file.map);
    json edges = json::array();
    for (const Edge& e : d.violations) edges.push_back({e.i, e.j});
    report["delaunay"] = {{"delaunay", d.delaunay()},
                          {"interior_edges", d.interior_edges},
                          {"cocircular", d.cocircular},
                          {"violations", edges}};
    violations += static_cast<std::int64_t>(d.violations.size());
  }
  if (a.embedding) {
    const EmbeddingReport e = check_embedding(file.mesh, file.map);
    report["embedding"] = {{"embedded", e.embedded},
                           {"witness", e.witness ? json(*e.witness) : json(nullptr)},
                           {"reason", e.reason},
                           {"flipped_faces", e.flipped_faces}};
    if (!e.embedded) ++violations;
  }
  if (a.min_angle) {
    report["min_angle"] = file.mesh.faces().empty() ? json(nullptr) : json(min_inner_angle(file.mesh, file.map));
  }
  report["violations"] = violations;
  out << report.dump(2) << '\n';
  return violations > 0 ? kViolations : kOk;
}

int do_conformal(const ConformalArgs& a, std::ostream& out) {
  const MeshFile file = parse_mesh_json(read_file(a.mesh));
  const FactorField u = parse_factors_json(read_file(a.factors), file.mesh);
  LengthField changed;
  if (a.mode == "hyp") {
    changed = hyp_change(file.mesh, induced_lengths(file.mesh, file.map), u);
  } else {
    LengthField chords;
    for (const Edge& e : file.mesh.edges()) chords.values.push_back(std::abs(file.map[e.j].z() - file.map[e.i].z()));
    changed = euc_change(file.mesh, chords, u);
  }
  write_file(a.out, write_lengths_json(file.mesh, changed));
  out << json{{"mode", a.mode},
              {"edges", changed.values.size()},
              {"non_realizable_faces", triangle_inequality_violations(file.mesh, changed)}}
             .dump()
      << '\n';
  return kOk;
}

std::optional<std::uint64_t> parse_seed(std::string_view text) {
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return seed;
}

int do_solve(const SolveArgs& a, std::ostream& out) {
  std::optional<std::uint64_t> seed;
  if (a.init.rfind("random:", 0) == 0) {
    seed = parse_seed(std::string_view(a.init).substr(7));
    if (!seed) throw UsageError("--init random:SEED needs a nonnegative integer seed");
  } else if (a.init != "zero") {
    throw UsageError("--init must be zero or random:SEED");
  }

  const MeshFile file = parse_mesh_json(read_file(a.mesh));
  const LengthField l = induced_lengths(file.mesh, file.map);
  const PinnedValues pinned = pin_boundary(file.mesh, a.pin);
  FactorField init = FactorField::zeros(file.mesh.id_bound());
  for (VertexId v : file.mesh.vertices()) {
    if (pinned.count(v)) {
      init[v] = a.pin;
    } else if (seed) {
      SampleRng rng(*seed, static_cast<std::uint64_t>(v));
      init[v] = rng.uniform(-0.1, 0.1);
    }
  }

  const SolveResult result = yamabe_solve(file.mesh, l, pinned, init);
  write_file(a.out, write_factors_json(file.mesh, result.factors));
  json log = json::array();
  for (const IterationRecord& r : result.log) {
    log.push_back({{"iteration", r.iteration}, {"residual", r.residual}, {"step", r.step}, {"halvings", r.halvings}});
  }
  out << json{{"converged", true},
              {"iterations", result.iterations},
              {"residual", result.residual},
              {"max_abs_factor", result.factors.max_norm(file.mesh)},
              {"log", log}}
             .dump(2)
      << '\n';
  return kOk;
}

int do_verify(const VerifyArgs& a, std::ostream& out) {
  SampleConfig cfg;
  cfg.count = a.samples;
  cfg.seed = a.seed;
  cfg.threads = a.threads;

  std::vector<AuditReport> reports;
  const auto want = [&](const char* name) { return a.suite == "all" || a.suite == name; };
  if (want("chain")) reports.push_back(check_elementary_chain(cfg));
  if (want("distance")) reports.push_back(check_compare_distance(cfg));
  if (want("angle")) reports.push_back(check_angle_lemma(cfg));
  if (want("maxprinciple")) reports.push_back(falsify_max_principle(cfg));
  if (want("conversion")) reports.push_back(check_conversion(cfg));
  if (want("s3chain")) reports.push_back(check_contradiction_chain(cfg, a.epsilon));

  const bool passed = std::all_of(reports.begin(), reports.end(), [](const AuditReport& r) { return r.passed(); });
  if (a.suite == "all") {
    json list = json::array();
    for (const AuditReport& r : reports) list.push_back(to_json(r));
    out << list.dump(2) << '\n';
  } else {
    out << to_json(reports.front()).dump(2) << '\n';
  }
  return passed ? kOk : kViolations;
}

int do_render(const RenderArgs& a) {
  const MeshFile file = parse_mesh_json(read_file(a.mesh));
  RenderOptions options;
  options.companion = a.companion;
  write_file(a.out, render_svg(file.mesh, file.map, options));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete conformal geometry of hyperbolic triangulations in the Poincare disk", "hypdc"};
  app.require_subcommand(1, 1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a regular hexagonal patch");
  gen_cmd->add_option("--rings", gen.rings, "Number of hexagonal rings")->required();
  gen_cmd->add_option("--edge", gen.edge, "Hyperbolic edge length")->required();
  gen_cmd->add_option("--out", gen.out, "Output mesh JSON")->required();

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Check Delaunay, embedding and angle properties of a mesh");
  check_cmd->add_option("--mesh", check.mesh, "Mesh JSON")->required();
  check_cmd->add_flag("--delaunay", check.delaunay, "Delaunay test on interior edges");
  check_cmd->add_flag("--embedding", check.embedding, "Local embedding test");
  check_cmd->add_flag("--min-angle", check.min_angle, "Smallest hyperbolic inner angle");

  ConformalArgs conformal;
  auto* conformal_cmd = app.add_subcommand("conformal", "Apply a conformal change to the edge lengths");
  conformal_cmd->add_option("--mesh", conformal.mesh, "Mesh JSON")->required();
  conformal_cmd->add_option("--factors", conformal.factors, "Factor JSON")->required();
  conformal_cmd->add_option("--mode", conformal.mode, "hyp or euc")
      ->required()
      ->check(CLI::IsMember({"hyp", "euc"}));
  conformal_cmd->add_option("--out", conformal.out, "Output length JSON")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Flatten interior curvature with the boundary factors pinned");
  solve_cmd->add_option("--mesh", solve.mesh, "Mesh JSON")->required();
  solve_cmd->add_option("--pin-boundary", solve.pin, "Factor value on boundary vertices")->required();
  solve_cmd->add_option("--init", solve.init, "zero or random:SEED");
  solve_cmd->add_option("--out", solve.out, "Output factor JSON")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a sampling audit");
  verify_cmd->add_option("--suite", verify.suite, "all|chain|distance|angle|maxprinciple|conversion|s3chain")
      ->required()
      ->check(CLI::IsMember({"all", "chain", "distance", "angle", "maxprinciple", "conversion", "s3chain"}));
  verify_cmd->add_option("--samples", verify.samples, "Number of samples")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed, "Seed");
  verify_cmd->add_option("--epsilon", verify.epsilon, "Epsilon for s3chain, in (0, 1]");
  verify_cmd->add_option("--threads", verify.threads, "Worker threads (0 = all cores)");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Draw a mesh as SVG");
  render_cmd->add_option("--mesh", render.mesh, "Mesh JSON")->required();
  render_cmd->add_option("--out", render.out, "Output SVG")->required();
  render_cmd->add_flag("--companion", render.companion, "Overlay Euclidean chords");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "usage", e.what());
    return kInputError;
  }

  try {
    if (gen_cmd->parsed()) return do_gen(gen, out);
    if (check_cmd->parsed()) return do_check(check, out);
    if (conformal_cmd->parsed()) return do_conformal(conformal, out);
    if (solve_cmd->parsed()) return do_solve(solve, out);
    if (verify_cmd->parsed()) return do_verify(verify, out);
    return do_render(render);
  } catch (const NonConvergenceError& e) {
    diagnose(err, "nonconvergence", e.what(), {{"residual", e.residual()}, {"iterations", e.iterations()}});
    return kNonConvergence;
  } catch (const InfeasibleStepError& e) {
    diagnose(err, "infeasible_step", e.what(), {{"residual", e.residual()}});
    return kNonConvergence;
  } catch (const ParseError& e) {
    diagnose(err, "parse", e.what());
  } catch (const HypothesisError& e) {
    diagnose(err, "hypothesis", e.what(), {{"hypothesis", e.hypothesis()}});
  } catch (const TriangleInequalityError& e) {
    diagnose(err, "triangle_inequality", e.what(), {{"face", e.face()}, {"side", e.side()}});
  } catch (const UsageError& e) {
    diagnose(err, "usage", e.what());
  } catch (const std::exception& e) {
    diagnose(err, "input", e.what());
  }
  return kInputError;
}

}  // namespace hypdc::cli
