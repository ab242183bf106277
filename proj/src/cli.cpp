#include "reconf/cli.hpp"

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "reconf/compose.hpp"
#include "reconf/constants.hpp"
#include "reconf/error.hpp"
#include "reconf/experiments.hpp"
#include "reconf/generate.hpp"
#include "reconf/instance_io.hpp"
#include "reconf/pipeline.hpp"
#include "reconf/robustize.hpp"
#include "reconf/solver.hpp"

namespace reconf {
namespace {

constexpr const char* kEnvPrefix = "RECONF_";

std::string env(const std::string& flag) {
  std::string name = kEnvPrefix;
  for (const char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

// Registers --name with a RECONF_NAME override.
template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env(name));
}

Ratio parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      return Ratio(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }
    // decimal with at most 6 fractional digits
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Ratio(std::stoll(text), 1);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 6) throw std::invalid_argument("precision");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t whole = dot == 0 ? 0 : std::stoll(text.substr(0, dot));
    return Ratio(whole * den + std::stoll(frac), den).reduced();
  } catch (const std::exception&) {
    throw Error("cannot parse ratio '" + text + "'");
  }
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::function<int()> action;
};

void add_generate(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("generate", "Generate a binary reconfiguration instance");
  struct Opts {
    std::string kind = "path";
    std::size_t vertices = 3;
    std::uint32_t alphabet = 4;
    std::size_t edges = 0;
    std::string density = "1/2";
    bool satisfiable = false;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t budget = kDefaultStateBudget;
    int attempts = 200;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  flag(cmd, "kind", o->kind, "path, cycle or random")->check(CLI::IsMember({"path", "cycle", "random"}));
  flag(cmd, "vertices", o->vertices, "Vertex count")->check(CLI::Range(2, 64));
  flag(cmd, "alphabet", o->alphabet, "Alphabet size")->check(CLI::Range(2, 4096));
  flag(cmd, "edges", o->edges, "Edge count (random graphs; default: vertex count)");
  flag(cmd, "density", o->density, "Probability of accepting each pair, as a/b or a decimal");
  cmd->add_flag("--satisfiable", o->satisfiable, "Satisfying endpoints joined by a satisfying path")
      ->envname(env("satisfiable"));
  flag(cmd, "seed", o->seed, "Random seed");
  flag(cmd, "budget", o->budget, "State budget of the solver check");
  flag(cmd, "attempts", o->attempts, "Resampling attempts for --satisfiable");
  flag(cmd, "out", o->out, "Output file (default: stdout)");
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o] {
      GenerateOptions g;
      g.kind = parse_graph_kind(o->kind);
      g.vertices = o->vertices;
      g.alphabet = o->alphabet;
      if (o->edges) g.edges = o->edges;
      g.density = parse_ratio(o->density);
      g.satisfiable = o->satisfiable;
      g.seed = o->seed;
      g.budget = o->budget;
      g.attempts = o->attempts;
      ctx.err << "seed: " << o->seed << "\n";
      const ReconfInstance inst = generate_instance(g);
      emit(o->out, serialize(inst), ctx.out);
      return 0;
    };
  });
}

void add_solve(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("solve", "Exact maxmin value of an instance");
  struct Opts {
    std::string instance;
    std::optional<std::uint64_t> threshold;
    std::uint64_t budget = kDefaultStateBudget;
    std::string witness;
  };
  auto o = std::make_shared<Opts>();
  flag(cmd, "instance", o->instance, "Instance file")->required();
  flag(cmd, "threshold", o->threshold, "Only decide reachability with at least K satisfied edges");
  flag(cmd, "budget", o->budget, "Maximum number of states");
  flag(cmd, "witness", o->witness, "Write the witness sequence here");
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o] {
      const ReconfInstance inst = read_instance(o->instance);
      std::optional<ReconfigSequence> witness;
      if (o->threshold) {
        const ReachResult r = reachable_at_threshold(inst, *o->threshold, o->budget);
        ctx.out << "reachable at " << *o->threshold << "/" << inst.graph.edge_count() << ": "
                << (r.reachable ? "yes" : "no") << "\n";
        witness = r.witness;
      } else {
        const MaxminResult r = maxmin_value(inst, o->budget);
        ctx.out << "maxmin: " << r.optimum.str() << "\n";
        witness = r.witness;
      }
      if (!o->witness.empty() && witness) write_file_atomic(o->witness, serialize_sequence(inst.graph, *witness));
      return 0;
    };
  });
}

void add_hadamard(CLI::App& app, Context& ctx) {
  auto* had = app.add_subcommand("hadamard", "Hadamard codeword tools");
  had->require_subcommand(1);

  auto* path = had->add_subcommand("path", "Random codeword path with its distance profile");
  struct PathOpts {
    std::uint64_t alpha = 0;
    std::uint64_t beta = 1;
    int n = 9;
    std::uint64_t seed = kDefaultSeed;
    int retries = 3;
    bool verify = false;
    std::string out;
  };
  auto p = std::make_shared<PathOpts>();
  flag(path, "alpha", p->alpha, "Start message");
  flag(path, "beta", p->beta, "End message");
  flag(path, "n", p->n, "Message length")->check(CLI::Range(2, 16));
  flag(path, "seed", p->seed, "Random seed");
  flag(path, "retries", p->retries, "Resampling attempts after a failed verification");
  flag(path, "out", p->out, "Profile CSV (default: stdout)");
  path->add_flag("--verify", p->verify, "Exit 1 unless every step passes the closeness and farness checks")
      ->envname(env("verify"));
  path->callback([&ctx, p] {
    ctx.action = [&ctx, p] {
      ctx.err << "seed: " << p->seed << "\n";
      const CodewordPath cp = generate_codeword_path(p->alpha, p->beta, p->n, p->seed, p->retries);
      std::ostringstream csv;
      csv << "step,flipped,hamming_alpha,hamming_beta,hamming_other_min,other_argmin\n";
      for (const ProfileRow& r : distance_profile(cp)) {
        csv << r.step << ',' << r.flipped << ',' << r.to_alpha << ',' << r.to_beta << ',' << r.to_other_min << ','
            << r.other_argmin << '\n';
      }
      emit(p->out, csv.str(), ctx.out);
      const PathCheck check = verify_codeword_path(cp);
      ctx.err << "attempts: " << cp.attempts << "\nverification: " << check.describe() << "\n";
      return check.ok() || !p->verify ? 0 : 1;
    };
  });

  auto* ps = had->add_subcommand("partial-sum", "Monte Carlo minimum partial sums of shuffled +-1 sequences");
  struct PsOpts {
    std::uint64_t half_length = 128;
    std::uint64_t trials = 100000;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
  };
  auto q = std::make_shared<PsOpts>();
  ps->add_option("--half-length,--n", q->half_length, "N: count of +1s (and of -1s)")
      ->envname(env("half-length"))
      ->check(CLI::Range(1, 1 << 20));
  flag(ps, "trials", q->trials, "Number of trials");
  flag(ps, "seed", q->seed, "Random seed");
  flag(ps, "out", q->out, "CSV (default: stdout)");
  ps->callback([&ctx, q] {
    ctx.action = [&ctx, q] {
      ctx.err << "seed: " << q->seed << "\n";
      const PartialSumReport r = partial_sum_experiment(q->half_length, q->trials, q->seed);
      emit(q->out, partial_sum_csv(r), ctx.out);
      return 0;
    };
  });
}

void add_robustize(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("robustize", "Encode a binary instance as a system of decoding circuits");
  struct Opts {
    std::string instance;
    std::string out;
    int min_n = 2;
    bool weakened = false;
  };
  auto o = std::make_shared<Opts>();
  flag(cmd, "instance", o->instance, "Instance file")->required();
  flag(cmd, "out", o->out, "Output directory")->required();
  flag(cmd, "n", o->min_n, "Smallest block exponent n (blocks have 2^n bits)")->check(CLI::Range(2, 16));
  cmd->add_flag("--weakened", o->weakened, "List radius 1/4 instead of 1/4 + 1/800 (negative tests only)")
      ->envname(env("weakened"));
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o] {
      const CircuitSystem sys = robustize(read_instance(o->instance), RobustizeOptions{o->min_n, o->weakened});
      write_system(o->out, sys);
      ctx.out << "n: " << sys.n << "\ncircuits: " << sys.circuits.size() << "\nlist radius: "
              << sys.circuits.front().list_radius() << "/" << (1U << sys.n) << "\n";
      return 0;
    };
  });
}

void add_verify_sequence(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("verify-sequence", "Per-step circuit satisfaction of a block sequence");
  struct Opts {
    std::string system;
    std::string sigma;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  flag(cmd, "system", o->system, "Circuit system directory")->required();
  flag(cmd, "sigma", o->sigma, "Sequence file, one line of hex blocks per step")->required();
  flag(cmd, "out", o->out, "CSV (default: stdout)");
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o] {
      const CircuitSystem sys = read_system(o->system);
      const auto seq = parse_sigma_sequence(sys, read_file(o->sigma));
      if (seq.empty()) throw Error("empty sequence");
      std::ostringstream csv;
      csv << "step,changed_bits,satisfied,total\n";
      bool ok = seq.front() == sys.sigma_ini && seq.back() == sys.sigma_tar;
      if (!ok) ctx.err << "sequence does not run from sigma_ini to sigma_tar\n";
      std::size_t min_sat = sys.circuits.size();
      for (std::size_t t = 0; t < seq.size(); ++t) {
        std::uint64_t changed = 0;
        if (t > 0) {
          for (std::size_t v = 0; v < seq[t].blocks.size(); ++v) changed += seq[t].blocks[v].hamming(seq[t - 1].blocks[v]);
        }
        if (changed > 1) {
          ok = false;
          ctx.err << "step " << t << " changes " << changed << " bits\n";
        }
        const std::size_t sat = satisfied_circuits(sys, seq[t]);
        min_sat = std::min(min_sat, sat);
        csv << t << ',' << changed << ',' << sat << ',' << sys.circuits.size() << '\n';
      }
      emit(o->out, csv.str(), ctx.out);
      ctx.err << "minimum satisfied: " << min_sat << "/" << sys.circuits.size() << "\n";
      return ok && min_sat == sys.circuits.size() ? 0 : 1;
    };
  });
}

void add_compose(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("compose", "Compose a micro circuit system with the reference tester");
  struct Opts {
    std::string system;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  flag(cmd, "system", o->system, "Circuit system directory (n <= 3)")->required();
  flag(cmd, "out", o->out, "Output directory")->required();
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o] {
      const ComposedInstance c = compose_system(read_system(o->system));
      std::filesystem::create_directories(o->out);
      write_instance(std::filesystem::path(o->out) / "instance.json", c.instance);
      write_file_atomic(std::filesystem::path(o->out) / "trace.json", c.trace.to_json());
      ctx.out << "vertices: " << c.instance.graph.vertex_count() << "\nhyperedges: " << c.instance.graph.edge_count()
              << "\nper circuit: " << c.hyperedges_per_circuit << "\n";
      const bool ok = value(c.instance.graph, c.instance.psi_ini).perfect() &&
                      value(c.instance.graph, c.instance.psi_tar).perfect();
      return ok ? 0 : 1;
    };
  });
}

void add_arity_reduce(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("arity-reduce", "Reduce a 4-ary instance to a binary one");
  struct Opts {
    std::string instance;
    std::string out;
    std::string trace;
    std::uint64_t cap = std::uint64_t{1} << 16;
  };
  auto o = std::make_shared<Opts>();
  flag(cmd, "instance", o->instance, "4-ary instance file")->required();
  flag(cmd, "out", o->out, "Binary instance file")->required();
  flag(cmd, "trace", o->trace, "Trace file (default: OUT.trace.json)");
  flag(cmd, "cap", o->cap, "Largest hyperedge-vertex alphabet to materialize");
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o] {
      const ArityReduction ar(read_instance(o->instance));
      const ReconfInstance bin = ar.materialize(o->cap);
      write_instance(o->out, bin);
      write_file_atomic(o->trace.empty() ? o->out + ".trace.json" : o->trace, ar.trace().to_json());
      ctx.out << "vertices: " << bin.graph.vertex_count() << "\nedges: " << bin.graph.edge_count()
              << "\nmax alphabet: " << bin.graph.max_alphabet() << "\n";
      return 0;
    };
  });
}

void add_pipeline(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("pipeline", "Run the reduction chain with per-stage values");
  struct Opts {
    std::string instance;
    std::string mode = "micro";
    std::string report;
    std::string out;
    std::string psi_path;
    std::uint64_t budget = kDefaultStateBudget;
    std::uint64_t seed = kDefaultSeed;
    int min_n = 2;
  };
  auto o = std::make_shared<Opts>();
  flag(cmd, "instance", o->instance, "Binary instance file")->required();
  flag(cmd, "mode", o->mode, "micro or n9")->check(CLI::IsMember({"micro", "n9"}));
  flag(cmd, "report", o->report, "Stage report CSV (default: stdout)");
  flag(cmd, "out", o->out, "Directory for stage artifacts");
  flag(cmd, "psi-path", o->psi_path, "Satisfying path for n9 mode (sequence file)");
  flag(cmd, "budget", o->budget, "State budget of every oracle call");
  flag(cmd, "seed", o->seed, "Random seed");
  flag(cmd, "n", o->min_n, "Smallest block exponent in micro mode")->check(CLI::Range(2, 3));
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o] {
      const ReconfInstance inst = read_instance(o->instance);
      PipelineOptions opt;
      opt.budget = o->budget;
      opt.seed = o->seed;
      opt.min_n = o->min_n;
      if (!o->out.empty()) opt.out_dir = o->out;
      if (!o->psi_path.empty()) opt.psi_path = deserialize_sequence(inst.graph, read_file(o->psi_path));
      ctx.err << "seed: " << o->seed << "\n";
      const PipelineReport r = o->mode == "micro" ? micro_pipeline(inst, opt) : n9_pipeline(inst, opt);
      emit(o->report, r.csv(), ctx.out);
      for (const auto& n : r.notes) ctx.err << "note: " << n << "\n";
      for (const auto& f : r.failures) ctx.err << "FAILED: " << f << "\n";
      ctx.err << theoretical_constants_text();
      return r.ok() ? 0 : 1;
    };
  });
}

void add_experiment(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("experiment", "Scripted experiments with CSV output");
  struct Opts {
    std::string name;
    int n = 0;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t trials = 100000;
    std::uint64_t half_length = 128;
    std::size_t instances = 10;
    std::uint64_t budget = kDefaultStateBudget;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("name", o->name, "fig2-profile, partial-sum, obs-n3, claim-partition or micro-pipeline")
      ->required()
      ->check(CLI::IsMember({"fig2-profile", "partial-sum", "obs-n3", "claim-partition", "micro-pipeline"}));
  flag(cmd, "n", o->n, "Message length (fig2-profile: 9, claim-partition: 4)");
  flag(cmd, "seed", o->seed, "Random seed");
  flag(cmd, "trials", o->trials, "Trials (partial-sum)");
  flag(cmd, "half-length", o->half_length, "N (partial-sum)");
  flag(cmd, "instances", o->instances, "Corpus size (micro-pipeline)");
  flag(cmd, "budget", o->budget, "State budget (micro-pipeline)");
  flag(cmd, "out", o->out, "CSV (default: stdout)");
  cmd->callback([&ctx, o] {
    ctx.action = [&ctx, o]() -> int {
      const std::string& name = o->name;
      if (name == "fig2-profile") {
        ctx.err << "seed: " << o->seed << "\n";
        const Fig2Result r = fig2_profile(o->n ? o->n : 9, o->seed);
        emit(o->out, r.csv, ctx.out);
        ctx.err << "alpha: " << r.alpha << " beta: " << r.beta << " attempts: " << r.attempts
                << "\nall steps far from other codewords: " << (r.all_far ? "yes" : "no") << "\n";
        return r.all_far ? 0 : 1;
      }
      if (name == "partial-sum") {
        ctx.err << "seed: " << o->seed << "\n";
        const PartialSumReport r = partial_sum_experiment(o->half_length, o->trials, o->seed);
        emit(o->out, partial_sum_csv(r), ctx.out);
        // allow sampling noise of five standard deviations above the bound
        const double slack = 5.0 * std::sqrt(r.bound / static_cast<double>(r.trials));
        return r.frequency.to_double() <= r.bound + slack ? 0 : 1;
      }
      if (name == "obs-n3") {
        const ObsN3Result r = obs_n3();
        emit(o->out, r.csv, ctx.out);
        ctx.err << r.failing_pairs << " of " << r.pairs << " ordered pairs fail for all " << r.orders_per_pair
                << " flip orders\n";
        return r.failing_pairs == r.pairs ? 0 : 1;
      }
      if (name == "claim-partition") {
        const PartitionSweep r = claim_partition(o->n ? o->n : 4);
        emit(o->out, r.csv, ctx.out);
        ctx.err << r.triples << " triples, " << r.violations << " violations\n";
        return r.violations == 0 ? 0 : 1;
      }
      ctx.err << "seed: " << o->seed << "\n";
      const MicroPipelineResult r = micro_pipeline_experiment(o->instances, o->seed, o->budget);
      emit(o->out, r.csv, ctx.out);
      for (std::size_t k = 0; k < r.reports.size(); ++k) {
        for (const auto& f : r.reports[k].failures) ctx.err << "instance " << k << " FAILED: " << f << "\n";
      }
      ctx.err << theoretical_constants_text();
      return r.ok ? 0 : 1;
    };
  });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Alphabet reduction for maxmin CSP reconfiguration"};
  app.name(args.empty() ? "reconf" : args.front());
  app.footer(std::string("Every --flag can also be set through the environment as ") + kEnvPrefix +
             "FLAG (dashes become underscores), e.g. RECONF_SEED=7. The default seed is " +
             std::to_string(kDefaultSeed) + ".");
  app.require_subcommand(1);
  Context ctx{out, err, {}};
  add_generate(app, ctx);
  add_solve(app, ctx);
  add_hadamard(app, ctx);
  add_robustize(app, ctx);
  add_verify_sequence(app, ctx);
  add_compose(app, ctx);
  add_arity_reduce(app, ctx);
  add_pipeline(app, ctx);
  add_experiment(app, ctx);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (!ctx.action) return 2;
  try {
    return ctx.action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace reconf
