#include "layerfid/simulator/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "layerfid/core/gates.hpp"

namespace layerfid {
namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  void join(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
  void join_all(std::span<const int> qs) {
    for (std::size_t i = 1; i < qs.size(); ++i) join(qs[0], qs[i]);
  }
};

Eigen::Index bit_of(int local, int k) { return Eigen::Index{1} << (k - 1 - local); }

int local_index(const std::vector<int>& qubits, int q) {
  const auto it = std::lower_bound(qubits.begin(), qubits.end(), q);
  return (it != qubits.end() && *it == q) ? static_cast<int>(it - qubits.begin()) : -1;
}

bool contains_all(const std::vector<int>& qubits, std::span<const int> qs) {
  return std::all_of(qs.begin(), qs.end(), [&](int q) { return local_index(qubits, q) >= 0; });
}

std::vector<int> to_local(const std::vector<int>& qubits, std::span<const int> qs) {
  std::vector<int> out;
  for (int q : qs) out.push_back(local_index(qubits, q));
  return out;
}

// rho -> P rho P for the Pauli with the given flip and sign masks (phases cancel).
ComplexMatrix pauli_conjugate(const ComplexMatrix& rho, Eigen::Index xmask, Eigen::Index zmask) {
  const Eigen::Index d = rho.rows();
  ComplexMatrix out(d, d);
  auto sign = [zmask](Eigen::Index k) { return (std::popcount(static_cast<std::uint64_t>(zmask & k)) & 1) ? -1.0 : 1.0; };
  for (Eigen::Index b = 0; b < d; ++b) {
    const double sb = sign(b ^ xmask);
    for (Eigen::Index a = 0; a < d; ++a) out(a, b) = sign(a ^ xmask) * sb * rho(a ^ xmask, b ^ xmask);
  }
  return out;
}

void apply_t1t2(ComplexMatrix& rho, int local, int k, double t1, double t2, double dt) {
  const double gamma = std::isfinite(t1) ? -std::expm1(-dt / t1) : 0.0;
  const double coherence = std::isfinite(t2) ? std::exp(-dt / t2) : std::sqrt(1.0 - gamma);
  if (gamma == 0.0 && coherence == 1.0) return;
  const Eigen::Index m = bit_of(local, k);
  const Eigen::Index d = rho.rows();
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index a = 0; a < d; ++a) {
      const bool ea = (a & m) != 0;
      const bool eb = (b & m) != 0;
      if (ea != eb) {
        rho(a, b) *= coherence;
      } else if (ea) {
        rho(a, b) *= 1.0 - gamma;
      } else {
        rho(a, b) += gamma * rho(a | m, b | m);
      }
    }
  }
}

void apply_pair_depolarizing(ComplexMatrix& rho, int la, int lb, int k, double alpha) {
  if (alpha >= 1.0) return;
  ComplexMatrix twirled = ComplexMatrix::Zero(rho.rows(), rho.cols());
  const Eigen::Index ma = bit_of(la, k);
  const Eigen::Index mb = bit_of(lb, k);
  for (int p = 0; p < 16; ++p) {
    const int pa = p >> 2;
    const int pb = p & 3;
    // 0 I, 1 X, 2 Y, 3 Z
    const Eigen::Index x = ((pa == 1 || pa == 2) ? ma : 0) | ((pb == 1 || pb == 2) ? mb : 0);
    const Eigen::Index z = ((pa >= 2) ? ma : 0) | ((pb >= 2) ? mb : 0);
    twirled += pauli_conjugate(rho, x, z);
  }
  rho = alpha * rho + ((1.0 - alpha) / 16.0) * twirled;
}

double marginal(const ComplexMatrix& rho, int k, const std::vector<int>& locals, const std::vector<int>& bits) {
  Eigen::Index mask = 0;
  Eigen::Index want = 0;
  for (std::size_t i = 0; i < locals.size(); ++i) {
    mask |= bit_of(locals[i], k);
    if (bits[i]) want |= bit_of(locals[i], k);
  }
  double p = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    if ((i & mask) == want) p += rho(i, i).real();
  }
  return p;
}

std::string op_key(const SliceOp& s) {
  char buf[96];
  const auto& op = s.op;
  switch (op.kind) {
    case NativeOp::Kind::X90:
      std::snprintf(buf, sizeof buf, "x%d;", op.qubits[0]);
      break;
    case NativeOp::Kind::Rz:
      std::snprintf(buf, sizeof buf, "z%d:%a;", op.qubits[0], op.angle);
      break;
    case NativeOp::Kind::TwoQubit:
      std::snprintf(buf, sizeof buf, "g%d,%d,%d:%d/%d;", static_cast<int>(op.type), op.qubits[0], op.qubits[1], s.step, s.steps);
      break;
  }
  return buf;
}

std::span<const int> op_qubits(const NativeOp& op) {
  return {op.qubits.data(), op.kind == NativeOp::Kind::TwoQubit ? std::size_t{2} : std::size_t{1}};
}

}  // namespace

ProductState ProductState::zero_state(std::vector<std::vector<int>> partition, int num_qubits) {
  ProductState s;
  s.num_qubits = num_qubits;
  std::vector<int> seen(static_cast<std::size_t>(num_qubits), 0);
  for (auto& qs : partition) {
    std::sort(qs.begin(), qs.end());
    for (int q : qs) {
      if (q < 0 || q >= num_qubits || seen[static_cast<std::size_t>(q)]++) throw std::invalid_argument("ProductState: partition is not a partition of the qubits");
    }
    if (static_cast<int>(qs.size()) > kMaxDenseQubits) throw std::invalid_argument("ProductState: block exceeds the dense qubit cap");
    const Eigen::Index d = Eigen::Index{1} << qs.size();
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    rho(0, 0) = 1.0;
    s.blocks.push_back({qs, std::move(rho)});
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw std::invalid_argument("ProductState: partition misses a qubit");
  return s;
}

DensityMatrix ProductState::to_density_matrix() const {
  if (num_qubits > kMaxDenseQubits) throw std::invalid_argument("ProductState: too many qubits for a dense matrix");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  ComplexMatrix rho(d, d);
  auto local = [this](const Block& blk, Eigen::Index full) {
    Eigen::Index idx = 0;
    for (int q : blk.qubits) idx = (idx << 1) | ((full >> (num_qubits - 1 - q)) & 1);
    return idx;
  };
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index a = 0; a < d; ++a) {
      std::complex<double> v = 1.0;
      for (const auto& blk : blocks) v *= blk.rho(local(blk, a), local(blk, b));
      rho(a, b) = v;
    }
  }
  return DensityMatrix::from_matrix(std::move(rho), 1e-8);
}

std::vector<std::vector<int>> coupled_components(const ScheduledCircuit& sched, const NoiseModel& noise) {
  const int n = sched.num_qubits;
  UnionFind uf(n);
  for (const auto& slice : sched.slices) {
    for (const auto& s : slice.ops) uf.join_all(op_qubits(s.op));
  }
  for (const auto& t : noise.coherent_terms) {
    if (t.kind == CoherentKind::Overrotation2Q || t.kind == CoherentKind::Underrotation1Q || t.kind == CoherentKind::ZDriftPerSlice) continue;
    uf.join_all(t.qubits);
  }
  for (const auto& t : noise.stochastic_terms) uf.join_all(t.qubits);

  std::vector<std::vector<int>> groups(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) groups[static_cast<std::size_t>(uf.find(q))].push_back(q);
  std::vector<std::vector<int>> out;
  for (auto& g : groups) {
    if (g.empty()) continue;
    if (static_cast<int>(g.size()) > kMaxDenseQubits) {
      throw std::invalid_argument("simulator: " + std::to_string(g.size()) + " coupled qubits exceed the dense cap of " + std::to_string(kMaxDenseQubits));
    }
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Simulator::Simulator(NoiseModel noise) : noise_(std::move(noise)) { noise_.validate(); }

const ComplexMatrix& Simulator::slice_unitary(const Slice& slice, const std::vector<int>& qubits, double unit_time) {
  std::vector<const SliceOp*> ops;
  std::string key = std::to_string(slice.duration) + "|";
  for (int q : qubits) key += std::to_string(q) + ",";
  key += "|";
  for (const auto& s : slice.ops) {
    if (!contains_all(qubits, op_qubits(s.op))) continue;
    ops.push_back(&s);
    key += op_key(s);
  }
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const int k = static_cast<int>(qubits.size());
  const Eigen::Index d = Eigen::Index{1} << k;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (const SliceOp* s : ops) {
    if (s->op.kind != NativeOp::Kind::Rz) continue;
    const int t[] = {local_index(qubits, s->op.qubits[0])};
    u = embed(rz_matrix(s->op.angle), t, k) * u;
  }
  if (slice.duration > 0) {
    SliceContext ctx;
    ctx.dt = unit_time * slice.duration;
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (const SliceOp* s : ops) {
      const auto locals = to_local(qubits, op_qubits(s->op));
      if (s->op.kind == NativeOp::Kind::X90) {
        ctx.x90_qubits.push_back(s->op.qubits[0]);
        h += embed(PauliString::from_label("X").matrix() * (std::numbers::pi / 4.0), locals, k);
      } else if (s->op.kind == NativeOp::Kind::TwoQubit) {
        ctx.gates.push_back({s->op.qubits[0], s->op.qubits[1], s->op.type, s->steps});
        h += embed(two_qubit_generator(s->op.type) / static_cast<double>(s->steps), locals, k);
      }
    }
    std::vector<ComplexMatrix> zz;
    std::vector<ComplexMatrix> drift;
    for (const auto& term : noise_.coherent_terms) {
      for (const auto& g : coherent_term_generators(term, ctx, noise_.num_qubits)) {
        if (!contains_all(qubits, g.qubits)) continue;
        const auto locals = to_local(qubits, g.qubits);
        switch (term.kind) {
          case CoherentKind::ZZAlwaysOn:
          case CoherentKind::ZZSimultaneous2Q:
            zz.push_back(embed(hermitian_exp(g.h), locals, k));
            break;
          case CoherentKind::ZDriftPerSlice:
            drift.push_back(embed(hermitian_exp(g.h), locals, k));
            break;
          default:
            h += embed(g.h, locals, k);
        }
      }
    }
    if (h.cwiseAbs().maxCoeff() > 0.0) u = hermitian_exp(h) * u;
    for (const auto& f : zz) u = f * u;
    for (const auto& f : drift) u = f * u;
  }
  return cache_.emplace(std::move(key), std::move(u)).first->second;
}

void Simulator::run(const ScheduledCircuit& sched, ProductState& state) {
  if (sched.num_qubits != noise_.num_qubits) {
    throw std::invalid_argument("simulator: circuit has " + std::to_string(sched.num_qubits) + " qubits, noise model has " + std::to_string(noise_.num_qubits));
  }
  std::vector<int> block_of(static_cast<std::size_t>(sched.num_qubits), -1);
  for (std::size_t b = 0; b < state.blocks.size(); ++b) {
    for (int q : state.blocks[b].qubits) block_of[static_cast<std::size_t>(q)] = static_cast<int>(b);
  }
  for (const auto& slice : sched.slices) {
    if (slice.duration != 0 && slice.duration != 1) throw std::invalid_argument("simulator: slices must last 0 or 1 units");
    for (const auto& s : slice.ops) {
      if (slice.duration == 0 && s.op.kind != NativeOp::Kind::Rz) throw std::invalid_argument("simulator: zero-duration slice holds a timed op");
      const auto qs = op_qubits(s.op);
      for (int q : qs) {
        if (q < 0 || q >= sched.num_qubits || block_of[static_cast<std::size_t>(q)] != block_of[static_cast<std::size_t>(qs[0])]) {
          throw std::invalid_argument("simulator: op crosses the state partition");
        }
      }
    }
  }

  const double dt = sched.unit_time;
  for (const auto& slice : sched.slices) {
    for (auto& blk : state.blocks) {
      const int k = static_cast<int>(blk.qubits.size());
      const ComplexMatrix& u = slice_unitary(slice, blk.qubits, dt);
      if (!u.isIdentity(0.0)) blk.rho = u * blk.rho * u.adjoint();
      if (slice.duration == 0) continue;

      for (const auto& term : noise_.stochastic_terms) {
        if (term.probability == 0.0 || !contains_all(blk.qubits, term.qubits)) continue;
        Eigen::Index x = 0;
        Eigen::Index z = 0;
        for (std::size_t i = 0; i < term.qubits.size(); ++i) {
          const Eigen::Index m = bit_of(local_index(blk.qubits, term.qubits[i]), k);
          if (term.pauli.x(static_cast<int>(i))) x |= m;
          if (term.pauli.z(static_cast<int>(i))) z |= m;
        }
        blk.rho = (1.0 - term.probability) * blk.rho + term.probability * pauli_conjugate(blk.rho, x, z);
      }
      for (const auto& s : slice.ops) {
        if (s.op.kind != NativeOp::Kind::TwoQubit || s.step != s.steps - 1) continue;
        if (!contains_all(blk.qubits, op_qubits(s.op))) continue;
        for (const auto& g : noise_.gate_depolarizing) {
          const bool same = (g.q0 == s.op.qubits[0] && g.q1 == s.op.qubits[1]) || (g.q0 == s.op.qubits[1] && g.q1 == s.op.qubits[0]);
          if (same) apply_pair_depolarizing(blk.rho, local_index(blk.qubits, g.q0), local_index(blk.qubits, g.q1), k, g.alpha);
        }
      }
      for (int i = 0; i < k; ++i) {
        const auto& c = noise_.qubits[static_cast<std::size_t>(blk.qubits[static_cast<std::size_t>(i)])];
        apply_t1t2(blk.rho, i, k, c.t1, c.t2, dt);
      }
    }
  }
}

ProductState Simulator::evolve_product(const ScheduledCircuit& sched) {
  ProductState state = ProductState::zero_state(coupled_components(sched, noise_), sched.num_qubits);
  run(sched, state);
  return state;
}

DensityMatrix Simulator::evolve(const ScheduledCircuit& sched) {
  if (sched.num_qubits > kMaxDenseQubits) throw std::invalid_argument("simulator: dense evolution is capped at " + std::to_string(kMaxDenseQubits) + " qubits");
  std::vector<int> all(static_cast<std::size_t>(sched.num_qubits));
  std::iota(all.begin(), all.end(), 0);
  ProductState state = ProductState::zero_state({all}, sched.num_qubits);
  run(sched, state);
  return DensityMatrix::from_matrix(std::move(state.blocks[0].rho), 1e-8);
}

double Simulator::process_fidelity(const ScheduledCircuit& sched, const ComplexMatrix& target) {
  if (sched.num_qubits > 6) throw std::invalid_argument("simulator: process fidelity is capped at 6 qubits");
  const Eigen::Index d = Eigen::Index{1} << sched.num_qubits;
  if (target.rows() != d || target.cols() != d) throw std::invalid_argument("simulator: target unitary has the wrong dimension");
  std::vector<int> all(static_cast<std::size_t>(sched.num_qubits));
  std::iota(all.begin(), all.end(), 0);
  // F = sum_ij <i| U^dag E(|i><j|) U |j> / d^2
  std::complex<double> total = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ProductState state{sched.num_qubits, {{all, ComplexMatrix::Zero(d, d)}}};
      state.blocks[0].rho(i, j) = 1.0;
      run(sched, state);
      total += target.col(i).dot(state.blocks[0].rho * target.col(j));
    }
  }
  return total.real() / static_cast<double>(d * d);
}

DensityMatrix evolve(const ScheduledCircuit& sched, const NoiseModel& noise) { return Simulator(noise).evolve(sched); }

double unit_survival(const DensityMatrix& rho, std::span<const int> unit_qubits, std::uint64_t target) {
  const int n = rho.num_qubits();
  const int k = static_cast<int>(unit_qubits.size());
  std::vector<int> locals(unit_qubits.begin(), unit_qubits.end());
  std::vector<int> bits;
  for (int i = 0; i < k; ++i) {
    if (locals[static_cast<std::size_t>(i)] < 0 || locals[static_cast<std::size_t>(i)] >= n) throw std::invalid_argument("unit_survival: qubit out of range");
    bits.push_back(static_cast<int>((target >> (k - 1 - i)) & 1U));
  }
  return std::clamp(marginal(rho.matrix(), n, locals, bits), 0.0, 1.0);
}

double unit_survival(const ProductState& state, std::span<const int> unit_qubits, std::uint64_t target) {
  const int k = static_cast<int>(unit_qubits.size());
  double p = 1.0;
  std::vector<char> used(unit_qubits.size(), 0);
  for (const auto& blk : state.blocks) {
    std::vector<int> locals;
    std::vector<int> bits;
    for (int i = 0; i < k; ++i) {
      const int l = local_index(blk.qubits, unit_qubits[static_cast<std::size_t>(i)]);
      if (l < 0) continue;
      used[static_cast<std::size_t>(i)] = 1;
      locals.push_back(l);
      bits.push_back(static_cast<int>((target >> (k - 1 - i)) & 1U));
    }
    if (!locals.empty()) p *= marginal(blk.rho, static_cast<int>(blk.qubits.size()), locals, bits);
  }
  if (std::count(used.begin(), used.end(), 0) != 0) throw std::invalid_argument("unit_survival: qubit out of range");
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> hamming_distribution(const ProductState& state, std::span<const int> unit_qubits, std::uint64_t target) {
  const int k = static_cast<int>(unit_qubits.size());
  std::vector<double> dist{1.0};
  std::vector<char> used(unit_qubits.size(), 0);
  for (const auto& blk : state.blocks) {
    const int bk = static_cast<int>(blk.qubits.size());
    Eigen::Index mask = 0;
    Eigen::Index want = 0;
    for (int i = 0; i < k; ++i) {
      const int l = local_index(blk.qubits, unit_qubits[static_cast<std::size_t>(i)]);
      if (l < 0) continue;
      used[static_cast<std::size_t>(i)] = 1;
      mask |= bit_of(l, bk);
      if ((target >> (k - 1 - i)) & 1U) want |= bit_of(l, bk);
    }
    if (mask == 0) continue;
    std::vector<double> local(static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(mask))) + 1, 0.0);
    for (Eigen::Index x = 0; x < blk.rho.rows(); ++x) {
      local[static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>((x ^ want) & mask)))] += std::max(blk.rho(x, x).real(), 0.0);
    }
    std::vector<double> next(dist.size() + local.size() - 1, 0.0);
    for (std::size_t a = 0; a < dist.size(); ++a) {
      for (std::size_t b = 0; b < local.size(); ++b) next[a + b] += dist[a] * local[b];
    }
    dist = std::move(next);
  }
  if (std::count(used.begin(), used.end(), 0) != 0) throw std::invalid_argument("hamming_distribution: qubit out of range");
  return dist;
}

std::vector<std::uint64_t> sample(std::span<const double> probabilities, std::uint64_t shots, std::mt19937_64& rng) {
  std::vector<std::uint64_t> counts;
  if (shots == 0) return counts;
  for (double p : probabilities) {
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) throw std::invalid_argument("sample: probability outside [0, 1]");
    std::binomial_distribution<std::uint64_t> draw(shots, std::clamp(p, 0.0, 1.0));
    counts.push_back(draw(rng));
  }
  return counts;
}

double SimOutcome::observed(std::size_t unit) const {
  if (counts) return static_cast<double>(counts->at(unit)) / static_cast<double>(shots);
  return survival.at(unit);
}

SimOutcome simulate(const RBCircuit& rb, Simulator& sim, const SimOptions& options) {
  const auto sched = schedule(rb.circuit, options.unit_time, rb.align_late ? Alignment::Late : Alignment::Early);
  const ProductState state = sim.evolve_product(sched);
  SimOutcome out;
  out.total_units = sched.total_units();
  out.seed = options.seed;
  out.shots = options.shots;
  for (std::size_t u = 0; u < rb.units.size(); ++u) out.survival.push_back(unit_survival(state, rb.units[u].qubits, rb.targets[u]));
  if (is_mirror(rb.family)) out.hamming = hamming_distribution(state, rb.units.at(0).qubits, rb.targets.at(0));
  if (options.shots > 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32), static_cast<std::uint32_t>(rb.family),
                      static_cast<std::uint32_t>(rb.sublayer), static_cast<std::uint32_t>(rb.depth), static_cast<std::uint32_t>(rb.randomization), 0x5a4dU};
    std::mt19937_64 rng(seq);
    out.counts = sample(out.survival, options.shots, rng);
    if (!out.hamming.empty()) {
      // Multinomial over distances via chained binomials.
      std::uint64_t left = options.shots;
      double mass = 1.0;
      for (double& h : out.hamming) {
        const double p = mass > 0.0 ? std::clamp(h / mass, 0.0, 1.0) : 0.0;
        mass -= h;
        const std::uint64_t c = left > 0 ? std::binomial_distribution<std::uint64_t>(left, p)(rng) : 0;
        left -= c;
        h = static_cast<double>(c) / static_cast<double>(options.shots);
      }
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const SimOutcome& outcome) {
  j = {{"survival", outcome.survival}, {"shots", outcome.shots}, {"total_units", outcome.total_units}, {"seed", outcome.seed}};
  if (outcome.counts) j["counts"] = *outcome.counts;
  if (!outcome.hamming.empty()) j["hamming"] = outcome.hamming;
}

}  // namespace layerfid
