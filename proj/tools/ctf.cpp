// Command-line front end: event generation, reconstruction, benchmarks and
// truth matching.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 failed check in --assert mode.

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctf/ctf.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAssert = 3;

ctf::RunConfig load_config(const std::string& path) {
  return path.empty() ? ctf::RunConfig{} : ctf::read_config(path);
}

void write_ledger(const ctf::quantum::QueryLedger& ledger, const std::string& path) {
  if (path.empty()) return;
  ctf::detail::write_file(path, nlohmann::json(ledger).dump(1) + "\n");
}

struct GenArgs {
  std::size_t n = 100;
  std::size_t layers = 8;
  std::uint64_t seed = 1;
  bool adversarial = false;
  std::optional<double> bundle_a;
  std::string out;
  std::string csv;
  std::string config;
};

int run_gen(const GenArgs& a) {
  const ctf::RunConfig cfg = load_config(a.config);
  ctf::EventRecord event;
  if (a.bundle_a) {
    event = ctf::make_bundle_event(a.n, *a.bundle_a, a.seed, a.layers);
  } else {
    ctf::GeneratorConfig g = cfg.generator;
    g.n = a.n;
    g.rng_seed = a.seed;
    g.adversarial = a.adversarial;
    event = ctf::generate_event(g, ctf::DetectorGeometry::uniform(a.layers));
  }
  ctf::write_event_json(event, a.out);
  if (!a.csv.empty()) ctf::write_event_csv(event, a.csv);
  std::size_t hits = 0;
  for (const auto& l : event.hits) hits += l.size();
  std::cout << "wrote " << a.out << ": " << event.num_layers() << " layers, " << hits << " hits\n";
  return 0;
}

struct RecoArgs {
  std::string algo = "improved";
  std::string event;
  std::string config;
  std::string out;
  std::string ledger;
  std::string csv;
  std::uint64_t seed = 1;
};

int run_reco(const RecoArgs& a) {
  const ctf::RunConfig cfg = load_config(a.config);
  const ctf::EventRecord event = ctf::read_event_json(a.event);
  const ctf::SurfaceView view(event);
  std::mt19937_64 rng(a.seed);
  std::vector<ctf::TrackCandidate> tracks;
  std::optional<ctf::quantum::QueryLedger> ledger;
  std::string summary;
  if (a.algo == "classical" || a.algo == "improved") {
    const auto variant =
        a.algo == "classical" ? ctf::CleaningVariant::kOriginal : ctf::CleaningVariant::kImproved;
    auto r = ctf::run_pipeline(event, cfg.ctf, variant);
    tracks = std::move(r.tracks);
    const auto& s = r.stats;
    summary = "k_seed " + std::to_string(s.k_seed) + ", k_find " + std::to_string(s.k_find) +
              ", k_clean " + std::to_string(s.k_clean) + ", k_select " + std::to_string(s.k_select) +
              ", ops " + std::to_string(s.total_ops());
  } else if (a.algo == "q-seed") {
    const auto q = ctf::quantum::q_generate_seeds(event, cfg.ctf, cfg.quantum, rng);
    auto r = ctf::run_from_seeds(q.seeds, view, cfg.ctf, ctf::CleaningVariant::kImproved);
    tracks = std::move(r.tracks);
    ledger = q.ledger;
    summary = "seeds " + std::to_string(q.seeds.size()) + " of estimated " +
              std::to_string(q.count_estimate) + (q.complete ? "" : " (collection timed out)");
  } else if (a.algo == "q-find") {
    const auto seeds = ctf::generate_seeds(event, cfg.ctf);
    auto q = ctf::quantum::q_find_tracks(seeds, view, cfg.ctf, cfg.quantum, rng);
    ctf::CleaningStats cs;
    auto cleaned = ctf::clean_tracks(std::move(q.tracks), cfg.ctf, ctf::CleaningVariant::kImproved, &cs);
    tracks = ctf::select_tracks(cleaned, view, cfg.ctf, cfg.ctf.quality_threshold);
    ledger = q.ledger;
    summary = "seeds " + std::to_string(seeds.size()) + ", repetitions " +
              std::to_string(q.repetitions);
  } else if (a.algo == "q-super") {
    const auto sc = ctf::quantum::SuperpositionConfig::from(cfg.ctf, cfg.quantum);
    auto q = ctf::quantum::reconstruct_superposition(event, cfg.ctf, sc, cfg.quantum, rng);
    tracks = std::move(q.tracks);
    ledger = q.ledger;
    summary = "rounds " + std::to_string(q.rounds) + ", finite candidates " +
              std::to_string(q.finite_candidates);
  } else {
    throw ctf::ConfigError("unknown algorithm " + a.algo);
  }
  ctf::write_tracks_json(tracks, a.out);
  if (!a.csv.empty()) ctf::write_tracks_csv(tracks, a.csv);
  if (ledger) {
    write_ledger(*ledger, a.ledger);
    summary += ", oracle calls " + std::to_string(ledger->oracle_calls);
  }
  std::cout << a.algo << ": " << tracks.size() << " tracks (" << summary << ")\n";
  return 0;
}

struct BenchArgs {
  std::string target = "seed";
  std::vector<std::size_t> ns;
  std::size_t trials = 3;
  std::uint64_t seed = 1;
  bool fit = false;
  std::string csv;
  std::string svg;
  std::string config;
  std::size_t layers = 8;
  double bundle_a = 1.0;
  bool check = false;
  std::optional<double> slope_min;
  std::optional<double> slope_max;
  std::optional<double> r2_min;
};

int run_bench(const BenchArgs& a) {
  ctf::BenchOptions o;
  o.target = ctf::parse_target(a.target);
  o.ns = a.ns;
  o.trials = a.trials;
  o.master_seed = a.seed;
  o.config = load_config(a.config);
  o.layers = a.layers;
  o.bundle_a = a.bundle_a;
  const ctf::BenchResult r = ctf::bench_scaling(o);
  for (std::size_t i = 0; i < r.ns.size(); ++i) {
    double wall = 0.0;
    for (const auto& t : r.trials) wall += t.n == r.ns[i] ? t.wall_seconds : 0.0;
    std::printf("n=%zu median=%.6g wall=%.3fs\n", r.ns[i], r.medians[i], wall);
  }
  if (!a.csv.empty()) ctf::detail::write_file(a.csv, ctf::bench_to_csv(r));
  if (!a.svg.empty()) ctf::detail::write_file(a.svg, ctf::bench_to_svg(r));
  if ((a.fit || a.check) && !r.fit) throw ctf::ConfigError("fit needs at least 4 values of n");
  if (a.fit) {
    std::printf("slope=%.4f intercept=%.4f r2=%.4f n=[%g, %g]\n", r.fit->slope, r.fit->intercept,
                r.fit->r_squared, r.fit->n_min, r.fit->n_max);
  }
  if (a.check) {
    bool ok = true;
    if (a.slope_min && r.fit->slope < *a.slope_min) ok = false;
    if (a.slope_max && r.fit->slope > *a.slope_max) ok = false;
    if (a.r2_min && r.fit->r_squared < *a.r2_min) ok = false;
    std::printf("%s\n", ok ? "assert: PASS" : "assert: FAIL");
    if (!ok) return kExitAssert;
  }
  return 0;
}

struct MatchArgs {
  std::string reco;
  std::string event;
  double min_frac = 0.75;
  bool check = false;
  std::optional<double> min_eff;
  std::optional<double> max_fake;
};

int run_match(const MatchArgs& a) {
  const auto tracks = ctf::read_tracks_json(a.reco);
  const auto event = ctf::read_event_json(a.event);
  for (const auto& t : tracks) {
    if (t.hits.size() != event.num_layers()) throw ctf::DataError("track length differs from event layers");
  }
  const auto m = ctf::match_truth(tracks, event, a.min_frac);
  std::printf("efficiency=%.4f fake_rate=%.4f matched=%zu particles=%zu tracks=%zu\n",
              m.efficiency, m.fake_rate, m.matched, m.particles, m.tracks);
  if (a.check) {
    bool ok = true;
    if (a.min_eff && m.efficiency < *a.min_eff) ok = false;
    if (a.max_fake && m.fake_rate > *a.max_fake) ok = false;
    std::printf("%s\n", ok ? "assert: PASS" : "assert: FAIL");
    if (!ok) return kExitAssert;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial track finding with classical and simulated quantum search"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic event");
  g->add_option("--n", gen.n, "Particles (or hits per layer for bundle events)")->check(CLI::PositiveNumber);
  g->add_option("--layers", gen.layers, "Detector layers")->check(CLI::Range(4, 16));
  g->add_option("--seed", gen.seed, "RNG seed");
  g->add_flag("--adversarial", gen.adversarial, "Draw all particles from a tiny parameter cuboid");
  g->add_option("--bundle-a", gen.bundle_a, "Bundle event with n^a good seeds");
  g->add_option("--out", gen.out, "Event JSON path")->required();
  g->add_option("--csv", gen.csv, "Also write hits as CSV");
  g->add_option("--config", gen.config, "Config JSON");

  RecoArgs reco;
  auto* r = app.add_subcommand("reco", "Reconstruct tracks in an event");
  r->add_option("--algo", reco.algo, "Algorithm")
      ->check(CLI::IsMember({"classical", "improved", "q-seed", "q-find", "q-super"}));
  r->add_option("--event", reco.event, "Event JSON")->required()->check(CLI::ExistingFile);
  r->add_option("--config", reco.config, "Config JSON")->check(CLI::ExistingFile);
  r->add_option("--out", reco.out, "Track JSON path")->required();
  r->add_option("--ledger", reco.ledger, "Query ledger JSON path (quantum algorithms)");
  r->add_option("--csv", reco.csv, "Also write tracks as CSV");
  r->add_option("--seed", reco.seed, "RNG seed of the quantum simulators");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Scaling benchmark of a stage or pipeline");
  b->add_option("--target", bench.target, "Benchmark target")
      ->check(CLI::IsMember({"seed", "find", "clean-orig", "clean-impr", "pipeline", "q-seed",
                             "q-find", "q-super", "density"}));
  b->add_option("--ns", bench.ns, "Ascending problem sizes")->required()->delimiter(',');
  b->add_option("--trials", bench.trials, "Trials per n")->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.seed, "Master seed");
  b->add_flag("--fit", bench.fit, "Print the log-log fit");
  b->add_option("--csv", bench.csv, "Per-trial CSV path");
  b->add_option("--svg", bench.svg, "SVG chart path");
  b->add_option("--config", bench.config, "Config JSON")->check(CLI::ExistingFile);
  b->add_option("--layers", bench.layers, "Detector layers")->check(CLI::Range(4, 16));
  b->add_option("--bundle-a", bench.bundle_a, "Good-seed exponent of q-seed events");
  b->add_flag("--assert", bench.check, "Exit 3 when the fit violates the given bounds");
  b->add_option("--slope-min", bench.slope_min, "Lower slope bound");
  b->add_option("--slope-max", bench.slope_max, "Upper slope bound");
  b->add_option("--r2-min", bench.r2_min, "Lower r^2 bound");

  MatchArgs match;
  auto* m = app.add_subcommand("match", "Match reconstructed tracks to truth");
  m->add_option("--reco", match.reco, "Track JSON")->required()->check(CLI::ExistingFile);
  m->add_option("--event", match.event, "Event JSON")->required()->check(CLI::ExistingFile);
  m->add_option("--min-frac", match.min_frac, "Minimum shared-hit fraction")->check(CLI::Range(0.0, 1.0));
  m->add_flag("--assert", match.check, "Exit 3 when the bounds are violated");
  m->add_option("--min-eff", match.min_eff, "Lower efficiency bound");
  m->add_option("--max-fake", match.max_fake, "Upper fake-rate bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*r) return run_reco(reco);
    if (*b) return run_bench(bench);
    if (*m) return run_match(match);
  } catch (const ctf::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ctf::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
