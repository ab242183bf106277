#include "reconf/robustize.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "json.hpp"
#include "reconf/constants.hpp"
#include "reconf/error.hpp"
#include "reconf/instance_io.hpp"
#include "reconf/rng.hpp"

namespace reconf {

std::uint32_t RobustCircuit::close_radius() const { return static_cast<std::uint32_t>((std::uint64_t{1} << n) / 4); }

std::uint32_t RobustCircuit::list_radius() const {
  if (weakened) return close_radius();
  // floor((1/4 + delta0/2) * 2^n) with delta0/2 = 1/800
  const Ratio r = constants::kQuarter + constants::kDelta0 * Ratio(1, 2);
  return static_cast<std::uint32_t>((static_cast<std::int64_t>(std::uint64_t{1} << n) * r.num()) / r.den());
}

namespace {

int bits_for(std::uint32_t alphabet) {
  int n = 0;
  while ((std::uint64_t{1} << n) < alphabet) ++n;
  return n;
}

}  // namespace

BlockAssignment encode_blocks(const Assignment& psi, int n) {
  BlockAssignment sigma;
  sigma.blocks.reserve(psi.size());
  for (std::size_t v = 0; v < psi.size(); ++v) {
    sigma.blocks.push_back(hadamard_code(n).codeword(static_cast<std::uint64_t>(psi[v])));
  }
  return sigma;
}

CircuitSystem robustize(const ReconfInstance& instance, RobustizeOptions options) {
  const ConstraintGraph& src = instance.graph;
  if (src.arity() != 2) throw Error("robustize needs a binary constraint graph");
  check_instance(instance);
  if (src.edge_count() == 0) throw Error("no constraints");
  const int n = std::max(options.min_n, bits_for(src.max_alphabet()));
  if (n < 2) throw Error("robustize needs n >= 2");
  if (n > 16) throw Error("alphabet too large to robustize");
  for (std::size_t e = 0; e < src.edge_count(); ++e) {
    if (!src.satisfies(e, instance.psi_ini.values()) || !src.satisfies(e, instance.psi_tar.values())) {
      throw Error("endpoint does not satisfy edge " + std::to_string(e));
    }
  }

  const auto padded_alphabet = static_cast<std::uint32_t>(std::uint64_t{1} << n);
  CircuitSystem sys{ConstraintGraph(2, padded_alphabet), n, options.weakened, {}, instance.psi_ini, instance.psi_tar,
                    {}, {}};
  for (std::size_t v = 0; v < src.vertex_count(); ++v) sys.graph.add_vertex(src.vertex_id(v));
  for (std::size_t e = 0; e < src.edge_count(); ++e) {
    const Hyperedge& h = src.edge(e);
    const auto tuples = h.constraint->tuples();
    const std::size_t idx = sys.graph.add_edge(h.vertices, tuples);
    sys.circuits.push_back(
        RobustCircuit{e, h.vertices[0], h.vertices[1], sys.graph.edge(idx).constraint, n, options.weakened});
  }
  sys.sigma_ini = encode_blocks(instance.psi_ini, n);
  sys.sigma_tar = encode_blocks(instance.psi_tar, n);
  return sys;
}

bool eval_circuit_from_distances(const RobustCircuit& c, const std::vector<std::uint32_t>& to_f,
                                 const std::vector<std::uint32_t>& to_g) {
  const std::uint32_t close = c.close_radius();
  const std::uint32_t list = c.list_radius();
  if (*std::min_element(to_f.begin(), to_f.end()) > close) return false;
  if (*std::min_element(to_g.begin(), to_g.end()) > close) return false;
  Symbol pair[2];
  for (std::size_t a = 0; a < to_f.size(); ++a) {
    if (to_f[a] > list) continue;
    pair[0] = static_cast<Symbol>(a);
    for (std::size_t b = 0; b < to_g.size(); ++b) {
      if (to_g[b] > list) continue;
      pair[1] = static_cast<Symbol>(b);
      if (!c.pi->contains(pair)) return false;
    }
  }
  return true;
}

bool eval_circuit(const RobustCircuit& c, const BitFunction& f, const BitFunction& g) {
  if (f.n() != c.n || g.n() != c.n) throw Error("length mismatch");
  const HadamardCode& code = hadamard_code(c.n);
  return eval_circuit_from_distances(c, code.distances(f), code.distances(g));
}

std::size_t satisfied_circuits(const CircuitSystem& system, const BlockAssignment& sigma) {
  const HadamardCode& code = hadamard_code(system.n);
  std::vector<std::vector<std::uint32_t>> dist;
  dist.reserve(sigma.blocks.size());
  for (const auto& b : sigma.blocks) dist.push_back(code.distances(b));
  std::size_t count = 0;
  for (const auto& c : system.circuits) count += eval_circuit_from_distances(c, dist[c.v], dist[c.w]) ? 1 : 0;
  return count;
}

Symbol decode_block(const BitFunction& f) {
  const auto dist = hadamard_code(f.n()).distances(f);
  return static_cast<Symbol>(std::min_element(dist.begin(), dist.end()) - dist.begin());
}

std::vector<BlockAssignment> completeness_sequence(const CircuitSystem& system, const ReconfigSequence& psi_seq,
                                                   std::uint64_t seed, int max_retries) {
  if (system.n < constants::kCodewordPathMinN) {
    throw Error("completeness sequence needs n >= " + std::to_string(constants::kCodewordPathMinN));
  }
  if (psi_seq.steps.empty()) throw Error("empty sequence");
  if (const auto bad = validate_sequence(psi_seq); !bad.empty()) {
    throw Error("invalid step at index " + std::to_string(bad.front()));
  }
  for (std::size_t t = 0; t < psi_seq.steps.size(); ++t) {
    if (!value(system.graph, psi_seq.steps[t]).perfect()) {
      throw Error("step " + std::to_string(t) + " of the assignment sequence does not satisfy the graph");
    }
  }

  std::vector<BlockAssignment> out;
  BlockAssignment cur = encode_blocks(psi_seq.steps.front(), system.n);
  out.push_back(cur);
  for (std::size_t t = 0; t + 1 < psi_seq.steps.size(); ++t) {
    const Assignment& a = psi_seq.steps[t];
    const Assignment& b = psi_seq.steps[t + 1];
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (a[v] == b[v]) continue;
      const CodewordPath path =
          generate_codeword_path(static_cast<std::uint64_t>(a[v]), static_cast<std::uint64_t>(b[v]), system.n,
                                 derive_seed(seed, static_cast<std::uint64_t>(t)), max_retries);
      for (std::size_t s = 1; s < path.steps.size(); ++s) {
        cur.blocks[v] = path.steps[s];
        out.push_back(cur);
      }
    }
  }
  return out;
}

ReconfigSequence extract_psi_sequence(const CircuitSystem& system, const std::vector<BlockAssignment>& sigma_seq) {
  ReconfigSequence seq;
  if (sigma_seq.empty()) return seq;
  const std::size_t nv = system.graph.vertex_count();
  Assignment cur(nv);
  for (std::size_t v = 0; v < nv; ++v) cur[v] = decode_block(sigma_seq.front().blocks.at(v));
  seq.steps.push_back(cur);
  for (std::size_t t = 1; t < sigma_seq.size(); ++t) {
    const BlockAssignment& prev = sigma_seq[t - 1];
    const BlockAssignment& next = sigma_seq[t];
    if (next.blocks.size() != nv) throw Error("sigma step " + std::to_string(t) + " has the wrong block count");
    std::uint64_t changed_bits = 0;
    std::size_t changed_vertex = nv;
    for (std::size_t v = 0; v < nv; ++v) {
      const std::uint64_t d = prev.blocks[v].hamming(next.blocks[v]);
      if (d != 0) {
        changed_bits += d;
        changed_vertex = v;
      }
    }
    if (changed_bits > 1) throw Error("sigma steps " + std::to_string(t - 1) + " and " + std::to_string(t) +
                                      " differ in more than one bit");
    if (changed_vertex == nv) continue;
    const Symbol s = decode_block(next.blocks[changed_vertex]);
    if (s == cur[changed_vertex]) continue;
    cur[changed_vertex] = s;
    seq.steps.push_back(cur);
  }
  return seq;
}

std::uint32_t pack_input(const BitFunction& f, const BitFunction& g) {
  if (f.n() != g.n()) throw Error("length mismatch");
  if (f.n() > 3) throw Error("micro oracle out of range");
  const auto shift = static_cast<unsigned>(f.size());
  return static_cast<std::uint32_t>(f.words()[0] | (g.words()[0] << shift));
}

std::pair<BitFunction, BitFunction> unpack_input(std::uint32_t input, int n) {
  if (n > 3) throw Error("micro oracle out of range");
  BitFunction f(n);
  BitFunction g(n);
  const std::uint64_t len = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < len; ++x) {
    f.set(x, (input >> x) & 1U);
    g.set(x, (input >> (len + x)) & 1U);
  }
  return {f, g};
}

std::vector<std::uint32_t> micro_sat_set(const RobustCircuit& c) {
  if (c.n > 3) throw Error("micro oracle out of range");
  const HadamardCode& code = hadamard_code(c.n);
  const std::uint64_t len = std::uint64_t{1} << c.n;
  // distances for every possible block, computed once
  std::vector<std::vector<std::uint32_t>> dist(std::uint64_t{1} << len);
  for (std::uint64_t blk = 0; blk < dist.size(); ++blk) dist[blk] = code.distances(unpack_input(static_cast<std::uint32_t>(blk), c.n).first);
  std::vector<std::uint32_t> sat;
  for (std::uint64_t fb = 0; fb < dist.size(); ++fb) {
    for (std::uint64_t gb = 0; gb < dist.size(); ++gb) {
      if (eval_circuit_from_distances(c, dist[fb], dist[gb])) sat.push_back(static_cast<std::uint32_t>(fb | (gb << len)));
    }
  }
  std::sort(sat.begin(), sat.end());
  return sat;
}

Ratio micro_distance(const std::vector<std::uint32_t>& sat_set, std::uint32_t input, int n) {
  if (sat_set.empty()) throw Error("unsatisfiable circuit");
  int best = 64;
  for (const std::uint32_t s : sat_set) best = std::min(best, std::popcount(s ^ input));
  return Ratio(best, std::int64_t{2} << n);
}

Ratio micro_distance_to_sat(const RobustCircuit& c, const BitFunction& f, const BitFunction& g) {
  if (c.n > 3 || f.n() > 3) throw Error("micro oracle out of range");
  if (f.n() != c.n || g.n() != c.n) throw Error("length mismatch");
  return micro_distance(micro_sat_set(c), pack_input(f, g), c.n);
}

ReconfInstance materialize(const CircuitSystem& system) {
  if (system.n > 3) throw Error("micro oracle out of range");
  const int n = system.n;
  const std::uint64_t len = std::uint64_t{1} << n;
  const std::size_t arity = 2 * len;
  ConstraintGraph g(arity, 2);
  for (std::size_t v = 0; v < system.graph.vertex_count(); ++v) {
    for (std::uint64_t x = 0; x < len; ++x) g.add_vertex(system.graph.vertex_id(v) + "#" + std::to_string(x));
  }
  const std::vector<std::uint32_t> radices(arity, 2);
  for (const RobustCircuit& c : system.circuits) {
    std::vector<std::uint64_t> keys;
    for (const std::uint32_t input : micro_sat_set(c)) {
      // coordinate 0 is the most significant digit of a relation key
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < arity; ++i) key = (key << 1) | ((input >> i) & 1U);
      keys.push_back(key);
    }
    std::vector<std::size_t> vars;
    for (std::uint64_t x = 0; x < len; ++x) vars.push_back(c.v * len + x);
    for (std::uint64_t x = 0; x < len; ++x) vars.push_back(c.w * len + x);
    g.add_edge(std::move(vars), std::make_shared<const Relation>(Relation::from_keys(radices, std::move(keys))));
  }
  return ReconfInstance{std::move(g), flatten_blocks(system.sigma_ini), flatten_blocks(system.sigma_tar)};
}

Assignment flatten_blocks(const BlockAssignment& sigma) {
  std::vector<Symbol> bits;
  for (const auto& b : sigma.blocks) {
    for (std::uint64_t x = 0; x < b.size(); ++x) bits.push_back(b.get(x) ? 1 : 0);
  }
  return Assignment(std::move(bits));
}

BlockAssignment unflatten_blocks(const CircuitSystem& system, const Assignment& bits) {
  const std::uint64_t len = std::uint64_t{1} << system.n;
  const std::size_t nv = system.graph.vertex_count();
  if (bits.size() != nv * len) throw Error("bit assignment has the wrong size");
  BlockAssignment sigma;
  for (std::size_t v = 0; v < nv; ++v) {
    BitFunction f(system.n);
    for (std::uint64_t x = 0; x < len; ++x) f.set(x, bits[v * len + x] != 0);
    sigma.blocks.push_back(std::move(f));
  }
  return sigma;
}

std::vector<BlockAssignment> random_sigma_sequence(const BlockAssignment& from, const BlockAssignment& to,
                                                   std::uint64_t seed, std::size_t scramble_steps) {
  if (from.blocks.size() != to.blocks.size() || from.blocks.empty()) throw Error("block count mismatch");
  const std::uint64_t len = from.blocks.front().size();
  Rng rng(derive_seed(seed, "sigma-sequence"));
  std::vector<BlockAssignment> seq{from};
  BlockAssignment cur = from;
  for (std::size_t i = 0; i < scramble_steps; ++i) {
    cur.blocks[rng.below(cur.blocks.size())].flip(rng.below(len));
    seq.push_back(cur);
  }
  std::vector<std::pair<std::size_t, std::uint64_t>> pending;
  for (std::size_t v = 0; v < cur.blocks.size(); ++v) {
    for (std::uint64_t x = 0; x < len; ++x) {
      if (cur.blocks[v].get(x) != to.blocks[v].get(x)) pending.emplace_back(v, x);
    }
  }
  rng.shuffle(std::span<std::pair<std::size_t, std::uint64_t>>(pending));
  for (const auto& [v, x] : pending) {
    cur.blocks[v].flip(x);
    seq.push_back(cur);
  }
  return seq;
}

std::vector<std::pair<BitFunction, BitFunction>> four_phase_path(int n, std::uint64_t a1, std::uint64_t a2,
                                                                 std::uint64_t b1, std::uint64_t b2) {
  const auto da = disagreement_set(a1, a2, n);
  const auto db = disagreement_set(b1, b2, n);
  const std::size_t half = da.size() / 2;
  BitFunction f = had_encode(a1, n);
  BitFunction g = had_encode(b1, n);
  std::vector<std::pair<BitFunction, BitFunction>> out{{f, g}};
  auto walk = [&](BitFunction& block, const std::vector<std::uint64_t>& d, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      block.flip(d[i]);
      out.emplace_back(f, g);
    }
  };
  walk(f, da, 0, half);
  walk(g, db, 0, half);
  walk(f, da, half, da.size());
  walk(g, db, half, db.size());
  return out;
}

std::string format_blocks(const CircuitSystem& system, const BlockAssignment& sigma) {
  std::string out;
  for (std::size_t v = 0; v < sigma.blocks.size(); ++v) {
    out += system.graph.vertex_id(v) + " " + sigma.blocks[v].to_hex() + "\n";
  }
  return out;
}

std::string format_sigma_sequence(const std::vector<BlockAssignment>& seq) {
  std::string out;
  for (const auto& step : seq) {
    for (std::size_t v = 0; v < step.blocks.size(); ++v) {
      if (v) out += ' ';
      out += step.blocks[v].to_hex();
    }
    out += '\n';
  }
  return out;
}

std::vector<BlockAssignment> parse_sigma_sequence(const CircuitSystem& system, const std::string& text) {
  std::vector<BlockAssignment> seq;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    BlockAssignment step;
    std::string hex;
    while (ls >> hex) step.blocks.push_back(BitFunction::from_hex(system.n, hex));
    if (step.blocks.size() != system.graph.vertex_count()) {
      throw Error("sigma line " + std::to_string(lineno) + ": expected " + std::to_string(system.graph.vertex_count()) +
                  " blocks");
    }
    seq.push_back(std::move(step));
  }
  return seq;
}

void write_system(const std::filesystem::path& dir, const CircuitSystem& system) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json root;
  root["n"] = system.n;
  root["weakened"] = system.weakened;
  root["instance"] = nlohmann::ordered_json::parse(
      serialize(ReconfInstance{system.graph, system.psi_ini, system.psi_tar}));
  nlohmann::ordered_json circuits = nlohmann::ordered_json::array();
  for (const auto& c : system.circuits) {
    circuits.push_back({{"edge", c.edge},
                        {"vertices", {system.graph.vertex_id(c.v), system.graph.vertex_id(c.w)}},
                        {"list_radius", c.list_radius()},
                        {"close_radius", c.close_radius()}});
  }
  root["circuits"] = std::move(circuits);
  write_file_atomic(dir / "system.json", root.dump(1) + "\n");
  write_file_atomic(dir / "sigma_ini.hex", format_blocks(system, system.sigma_ini));
  write_file_atomic(dir / "sigma_tar.hex", format_blocks(system, system.sigma_tar));
}

CircuitSystem read_system(const std::filesystem::path& dir) {
  const auto root = nlohmann::json::parse(read_file(dir / "system.json"));
  const int n = root.at("n").get<int>();
  const bool weakened = root.value("weakened", false);
  CircuitSystem sys = robustize(deserialize(root.at("instance").dump()), RobustizeOptions{n, weakened});
  if (sys.n != n) throw Error("system.json: n does not match the embedded instance");
  for (const auto& [file, expected] : {std::pair{"sigma_ini.hex", &sys.sigma_ini}, std::pair{"sigma_tar.hex", &sys.sigma_tar}}) {
    if (!std::filesystem::exists(dir / file)) continue;
    if (read_file(dir / file) != format_blocks(sys, *expected)) {
      throw Error(std::string(file) + ": blocks do not encode the embedded endpoint");
    }
  }
  return sys;
}

}  // namespace reconf
