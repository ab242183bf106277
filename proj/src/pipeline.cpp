#include "reconf/pipeline.hpp"

#include <sstream>

#include "reconf/compose.hpp"
#include "reconf/constants.hpp"
#include "reconf/error.hpp"
#include "reconf/instance_io.hpp"
#include "reconf/robustize.hpp"

namespace reconf {

const StageRow* PipelineReport::row(const std::string& stage) const {
  for (const auto& r : rows) {
    if (r.stage == stage) return &r;
  }
  return nullptr;
}

std::string PipelineReport::csv(bool header, const std::string& prefix_column) const {
  std::ostringstream out;
  const bool prefixed = !prefix_column.empty();
  if (header) {
    if (prefixed) out << "instance,";
    out << "stage,vertices,edges,max_alphabet,maxmin_numerator,maxmin_denominator,method,upper_bound\n";
  }
  for (const auto& r : rows) {
    if (prefixed) out << prefix_column << ',';
    out << r.stage << ',' << r.vertices << ',' << r.edges << ',' << r.max_alphabet << ',';
    if (r.maxmin) {
      out << r.maxmin->satisfied << ',' << r.maxmin->total;
    } else {
      out << ',';
    }
    out << ',' << r.method << ',' << (r.upper_bound ? r.upper_bound->str() : "") << '\n';
  }
  return out.str();
}

namespace {

bool over_budget(const Error& e) { return std::string(e.what()) == "instance too large for exact search"; }

template <typename F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw Error(stage + ": " + e.what());
  }
}

StageRow shape(const std::string& stage, const ConstraintGraph& g) {
  return StageRow{stage, g.vertex_count(), g.edge_count(), g.max_alphabet()};
}

// Oracle maxmin, or nullopt past the budget.
std::optional<MaxminResult> try_oracle(const ReconfInstance& inst, std::uint64_t budget) {
  try {
    return maxmin_value(inst, budget);
  } catch (const Error& e) {
    if (over_budget(e)) return std::nullopt;
    throw;
  }
}

}  // namespace

PipelineReport micro_pipeline(const ReconfInstance& instance, const PipelineOptions& options) {
  PipelineReport report;
  report.mode = "micro";
  const auto& out_dir = options.out_dir;
  if (out_dir) std::filesystem::create_directories(*out_dir);

  // source
  StageRow src = shape("source", instance.graph);
  const auto src_oracle = staged("source", [&] {
    if (instance.graph.arity() != 2) throw Error("the source must be binary");
    return try_oracle(instance, options.budget);
  });
  if (src_oracle) {
    src.maxmin = src_oracle->optimum;
    src.method = "exact";
  }
  report.rows.push_back(src);
  const bool source_perfect = src.maxmin && src.maxmin->perfect();

  // robustized, as an explicit constraint graph over block bits
  const CircuitSystem sys = staged("robustize", [&] {
    CircuitSystem s = robustize(instance, RobustizeOptions{options.min_n, false});
    if (s.n > 3) throw Error("micro mode needs n <= 3, got n = " + std::to_string(s.n));
    return s;
  });
  const ReconfInstance robust = staged("robustize", [&] { return materialize(sys); });
  StageRow rob = shape("robustized", robust.graph);
  const auto rob_oracle = staged("robustize", [&] { return try_oracle(robust, options.budget); });
  if (rob_oracle) {
    rob.maxmin = rob_oracle->optimum;
    rob.method = "exact";
  }
  report.rows.push_back(rob);
  const bool robust_perfect = rob.maxmin && rob.maxmin->perfect();
  if (source_perfect && rob.maxmin && !robust_perfect) {
    report.notes.push_back("robustized stage has no satisfying-step sequence at n = " + std::to_string(sys.n) +
                           " (codeword paths need n >= 9)");
  }

  // composed 4-ary
  const ComposedInstance comp = staged("compose", [&] { return compose_system(sys); });
  StageRow com = shape("composed", comp.instance.graph);
  std::optional<ReconfigSequence> composed_witness;
  staged("compose", [&] {
    if (!value(comp.instance.graph, comp.instance.psi_ini).perfect() ||
        !value(comp.instance.graph, comp.instance.psi_tar).perfect()) {
      report.failures.push_back("composed endpoints do not satisfy the 4-ary instance");
    }
    if (robust_perfect) {
      std::vector<BlockAssignment> sigma_seq;
      for (const Assignment& bits : rob_oracle->witness->steps) sigma_seq.push_back(unflatten_blocks(sys, bits));
      ReconfigSequence lifted = lift_sigma_sequence(comp, sigma_seq);
      if (sequence_value(comp.instance.graph, lifted).perfect() && lifted.steps.back() == comp.instance.psi_tar) {
        composed_witness = std::move(lifted);
        com.maxmin = Value{comp.instance.graph.edge_count(), comp.instance.graph.edge_count()};
        com.method = "witness";
      } else {
        report.failures.push_back("lifted robustized witness does not keep the composed value at 1");
      }
    }
    if (const auto oracle = try_oracle(comp.instance, options.budget)) {
      if (com.maxmin && *com.maxmin != oracle->optimum) {
        report.failures.push_back("composed oracle disagrees with the lifted witness");
      }
      com.maxmin = oracle->optimum;
      com.method = "exact";
      if (oracle->optimum.perfect() && !composed_witness) composed_witness = oracle->witness;
    }
    return 0;
  });
  report.rows.push_back(com);
  if (robust_perfect && !(com.maxmin && com.maxmin->perfect())) {
    report.failures.push_back("composed maxmin is below 1 although the robustized stage has value 1");
  }

  // binary
  const ArityReduction ar = staged("arity-reduce", [&] { return ArityReduction(comp.instance); });
  StageRow bin{"binary", ar.vertex_count(), ar.edge_count(), ar.max_alphabet()};
  staged("arity-reduce", [&] {
    if (composed_witness) {
      const auto states = ar.lift_sequence(*composed_witness);
      bool ok = states.back().x == comp.instance.psi_tar;
      for (std::size_t t = 0; ok && t < states.size(); ++t) {
        ok = ar.value(states[t]).perfect();
        if (ok && t > 0) {
          std::size_t diff = hamming(states[t].x, states[t - 1].x);
          for (std::size_t e = 0; e < states[t].z.size(); ++e) diff += states[t].z[e] != states[t - 1].z[e];
          ok = diff <= 1;
        }
      }
      if (ok) {
        bin.maxmin = Value{ar.edge_count(), ar.edge_count()};
        bin.method = "witness";
      } else {
        report.failures.push_back("lifted composed witness does not keep the binary value at 1");
      }
    } else if (com.method == "exact") {
      try {
        const Value u = ar.relaxation_upper_bound(options.budget);
        bin.upper_bound = u;
        bin.method = "bound";
        // 1 - U >= (1 - m4) / 4
        const Ratio lhs = Ratio(1, 1) - u.ratio();
        const Ratio rhs = (Ratio(1, 1) - com.maxmin->ratio()) * Ratio(1, 4);
        if (lhs < rhs) report.failures.push_back("binary stage loses more than a factor 4 of the gap");
      } catch (const Error& e) {
        if (!over_budget(e)) throw;
      }
    }
    return 0;
  });
  report.rows.push_back(bin);

  if (out_dir) {
    write_instance(*out_dir / "source.json", instance);
    write_system(*out_dir / "robustized", sys);
    write_instance(*out_dir / "composed.json", comp.instance);
    write_file_atomic(*out_dir / "composed.trace.json", comp.trace.to_json());
    write_file_atomic(*out_dir / "binary.trace.json", ar.trace().to_json());
    try {
      write_instance(*out_dir / "binary.json", ar.materialize());
    } catch (const Error& e) {
      report.notes.push_back(std::string("binary instance not written: ") + e.what());
    }
  }
  return report;
}

PipelineReport n9_pipeline(const ReconfInstance& instance, const PipelineOptions& options) {
  PipelineReport report;
  report.mode = "n9";
  StageRow src = shape("source", instance.graph);
  const ReconfigSequence path = staged("source", [&] {
    if (instance.graph.arity() != 2) throw Error("the source must be binary");
    if (instance.graph.max_alphabet() > 512) throw Error("n9 mode needs alphabets of at most 512");
    ReconfigSequence p;
    if (options.psi_path) {
      p = *options.psi_path;
    } else {
      const auto oracle = try_oracle(instance, options.budget);
      if (!oracle) throw Error("no satisfying path supplied and the instance is too large for exact search");
      if (!oracle->optimum.perfect()) throw Error("the instance has no satisfying reconfiguration path");
      p = *oracle->witness;
    }
    if (p.steps.empty() || p.steps.front() != instance.psi_ini || p.steps.back() != instance.psi_tar) {
      throw Error("the supplied path does not connect psi_ini to psi_tar");
    }
    if (!sequence_value(instance.graph, p).perfect()) throw Error("the supplied path leaves the satisfying set");
    return p;
  });
  src.maxmin = Value{instance.graph.edge_count(), instance.graph.edge_count()};
  src.method = "witness";
  report.rows.push_back(src);

  const CircuitSystem sys = staged("robustize", [&] {
    CircuitSystem s = robustize(instance, RobustizeOptions{9, false});
    if (s.n != 9) throw Error("n9 mode produced n = " + std::to_string(s.n));
    return s;
  });
  StageRow rob{"robustized", sys.graph.vertex_count() << sys.n, sys.circuits.size(), 2};
  const auto sigma_seq = staged("robustize", [&] { return completeness_sequence(sys, path, options.seed); });
  std::size_t bad_steps = 0;
  for (std::size_t t = 0; t < sigma_seq.size(); ++t) {
    if (satisfied_circuits(sys, sigma_seq[t]) != sys.circuits.size()) ++bad_steps;
    if (t > 0) {
      std::uint64_t d = 0;
      for (std::size_t v = 0; v < sigma_seq[t].blocks.size(); ++v) d += sigma_seq[t].blocks[v].hamming(sigma_seq[t - 1].blocks[v]);
      if (d != 1) report.failures.push_back("sigma step " + std::to_string(t) + " changes " + std::to_string(d) + " bits");
    }
  }
  if (sigma_seq.front() != sys.sigma_ini || sigma_seq.back() != sys.sigma_tar) {
    report.failures.push_back("sigma sequence has the wrong endpoints");
  }
  if (bad_steps == 0) {
    rob.maxmin = Value{sys.circuits.size(), sys.circuits.size()};
    rob.method = "witness";
    report.notes.push_back("all circuits satisfied at every step (" + std::to_string(sigma_seq.size()) + " steps)");
  } else {
    report.failures.push_back(std::to_string(bad_steps) + " sigma steps violate some circuit");
  }
  report.rows.push_back(rob);

  if (options.out_dir) {
    write_system(*options.out_dir / "robustized", sys);
    write_file_atomic(*options.out_dir / "sigma_sequence.txt", format_sigma_sequence(sigma_seq));
    write_file_atomic(*options.out_dir / "psi_path.json", serialize_sequence(instance.graph, path));
  }
  return report;
}

std::string theoretical_constants_text() {
  namespace th = constants::theoretical;
  std::ostringstream out;
  out << "theoretical (constant-alphabet tester, not reproduced here):\n"
      << "  inner alphabet        " << th::kInnerAlphabet << "\n"
      << "  rejection rate        " << th::kRejectionRate << "\n"
      << "  kappa~                " << th::kKappaTilde << "\n"
      << "  kappa                 " << th::kKappa << "\n"
      << "  final alphabet        " << th::kFinalAlphabet << "\n";
  return out.str();
}

}  // namespace reconf
