#include "centro/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "centro/parallel.hpp"

namespace centro {

namespace {

using Int = __int128;

void require_gaussian(const EntryDistribution& dist) {
  if (dist.kind != EntryDistribution::Kind::standard_complex_gaussian) {
    throw std::invalid_argument("exact moments are only available for the circular Gaussian law");
  }
}

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

Rational make_rational(Int num, Int den) {
  if (num == 0) return {0, 1};
  Int a = num < 0 ? -num : num;
  Int b = den;
  while (b != 0) {
    const Int t = a % b;
    a = b;
    b = t;
  }
  num /= a;
  den /= a;
  const Int lim = static_cast<Int>(INT64_MAX);
  if (num > lim || -num > lim || den > lim) throw std::overflow_error("moment does not fit a 64-bit rational");
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

Int factorial(int p) {
  Int f = 1;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}

/// Free-entry id of position (a, b), 0-based.
std::uint32_t free_entry(std::size_t n, std::size_t a, std::size_t b) {
  const std::size_t pos = a * n + b;
  const std::size_t mir = (n - 1 - a) * n + (n - 1 - b);
  return static_cast<std::uint32_t>(std::min(pos, mir));
}

using Multiset = std::vector<std::uint32_t>;

/// Visits the sorted free-entry multiset of every closed chain of length len.
template <typename Visit>
void for_each_chain(std::size_t n, int len, Visit&& visit) {
  if (len == 0) {
    visit(Multiset{});
    return;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
  Multiset ms(static_cast<std::size_t>(len));
  while (true) {
    for (int t = 0; t < len; ++t)
      ms[static_cast<std::size_t>(t)] = free_entry(n, idx[static_cast<std::size_t>(t)],
                                                   idx[static_cast<std::size_t>((t + 1) % len)]);
    Multiset sorted = ms;
    std::sort(sorted.begin(), sorted.end());
    visit(sorted);
    int p = len - 1;
    while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == n) idx[static_cast<std::size_t>(p--)] = 0;
    if (p < 0) break;
  }
}

/// E[Π u_v^p ū_v^p] = Π p! for independent standard circular Gaussians.
Int wick_weight(const Multiset& sorted) {
  Int w = 1;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    w *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return w;
}

/// Union-find over index variables where an edge says u = r^parity(v) with
/// r(a) = n+1-a.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t size) : parent_(size), parity_(size, 0), pinned_(size, false) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::pair<std::size_t, int> find(std::size_t x) {
    int p = 0;
    while (parent_[x] != x) {
      p ^= parity_[x];
      x = parent_[x];
    }
    return {x, p};
  }

  void unite(std::size_t a, std::size_t b, int parity) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) {
      if ((pa ^ pb) != parity) pinned_[ra] = true;  // forces a fixed point of r
      return;
    }
    parent_[ra] = rb;
    parity_[ra] = pa ^ pb ^ parity;
    if (pinned_[ra]) pinned_[rb] = true;
  }

  void pin(std::size_t a) { pinned_[find(a).first] = true; }

  /// Number of assignments in {1..n}^size satisfying every constraint.
  Int count(std::size_t n) {
    Int total = 1;
    for (std::size_t x = 0; x < parent_.size(); ++x) {
      if (find(x).first != x) continue;
      if (pinned_[x]) {
        if (n % 2 == 0) return 0;
      } else {
        total *= static_cast<Int>(n);
      }
    }
    return total;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> parity_;
  std::vector<bool> pinned_;
};

}  // namespace

void MomentQuery::validate() const {
  if (n < 1) throw std::invalid_argument("moment query: n must be >= 1");
  if (k < 1) throw std::invalid_argument("moment query: k must be >= 1");
  if (l < 0) throw std::invalid_argument("moment query: l must be >= 0");
}

Rational exact_mixed_trace_moment(const MomentQuery& q, const EntryDistribution& dist, std::uint64_t budget) {
  q.validate();
  require_gaussian(dist);
  if (checked_pow(q.n, q.k + q.l, budget) > budget) {
    throw BudgetExceeded("n^(k+l) exceeds the enumeration budget");
  }
  // The weight of (I, J) depends only on the two multisets, so tabulate the
  // shorter chain and stream the longer one against it.
  const bool conj_shorter = q.l <= q.k;
  const int short_len = conj_shorter ? q.l : q.k;
  const int long_len = conj_shorter ? q.k : q.l;
  std::map<Multiset, std::uint64_t> table;
  for_each_chain(q.n, short_len, [&](const Multiset& ms) { ++table[ms]; });

  Int total = 0;
  for_each_chain(q.n, long_len, [&](const Multiset& ms) {
    if (static_cast<int>(ms.size()) != short_len) return;  // counts can never balance
    auto it = table.find(ms);
    if (it == table.end()) return;
    total += static_cast<Int>(it->second) * wick_weight(ms);
  });
  if (total == 0) return {0, 1};
  // total != 0 only when k == l, so the scaling n^{(k+l)/2} is n^k.
  return make_rational(total, static_cast<Int>(checked_pow(q.n, q.k, UINT64_MAX - 1)));
}

Rational exact_single_trace_moment(std::size_t n, int k, const EntryDistribution& dist, std::uint64_t budget) {
  return exact_mixed_trace_moment({n, k, 0}, dist, budget);
}

Rational wick_mixed_trace_moment(const MomentQuery& q, const EntryDistribution& dist) {
  q.validate();
  require_gaussian(dist);
  if (q.k != q.l) return {0, 1};
  const auto k = static_cast<std::size_t>(q.k);
  // Variables 0..k-1 are i_1..i_k, k..2k-1 are j_1..j_k.
  auto ivar = [](std::size_t t, std::size_t kk) { return t % kk; };
  auto jvar = [](std::size_t s, std::size_t kk) { return kk + s % kk; };

  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t choices = 1;
  for (std::size_t t = 0; t < k; ++t) choices *= 3;

  Int total = 0;
  do {
    for (std::size_t c = 0; c < choices; ++c) {
      ParityUnionFind uf(2 * k);
      int sign = 1;
      std::size_t code = c;
      for (std::size_t t = 0; t < k; ++t) {
        const std::size_t kind = code % 3;  // 0: same entry, 1: mirrored, 2: both
        code /= 3;
        const std::size_t s = perm[t];
        const int parity = kind == 1 ? 1 : 0;
        uf.unite(ivar(t, k), jvar(s, k), parity);
        uf.unite(ivar(t + 1, k), jvar(s + 1, k), parity);
        if (kind == 2) {
          sign = -sign;
          uf.pin(ivar(t, k));
          uf.pin(ivar(t + 1, k));
        }
      }
      total += sign * uf.count(q.n);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (total == 0) return {0, 1};
  Int den = 1;
  for (std::size_t t = 0; t < k; ++t) den *= static_cast<Int>(q.n);
  return make_rational(total, den);
}

ExactMoment exact_trace_moment(const MomentQuery& q, const EntryDistribution& dist, std::uint64_t budget) {
  q.validate();
  if (checked_pow(q.n, q.k + q.l, budget) <= budget) {
    return {exact_mixed_trace_moment(q, dist, budget), MomentMethod::enumeration};
  }
  return {wick_mixed_trace_moment(q, dist), MomentMethod::wick};
}

double asymptotic_prediction(int k, int l) {
  if (k < 1 || l < 1) throw std::invalid_argument("asymptotic_prediction: k, l must be >= 1");
  return k == l ? 2.0 * k : 0.0;
}

std::vector<std::vector<McEstimate>> mc_trace_moment_grid(std::size_t n, int kmax, int lmax,
                                                          std::size_t trials, std::uint64_t seed,
                                                          unsigned threads) {
  if (trials < 2) throw std::invalid_argument("mc_trace_moment: need at least two trials");
  if (kmax < 1 || lmax < 0) throw std::invalid_argument("mc_trace_moment: bad power range");
  const int pmax = std::max(kmax, lmax);
  const auto stride = static_cast<std::size_t>(pmax);
  std::vector<Complex> traces(trials * stride);
  const EntryDistribution dist;

  parallel_for(trials, resolve_thread_count(threads), [&](std::size_t t) {
    const auto m = sample_centrosymmetric(n, dist, SeedStream{seed, t});
    const auto tr = trace_powers(m.matrix(), pmax);
    std::copy(tr.begin(), tr.end(), traces.begin() + static_cast<std::ptrdiff_t>(t * stride));
  });

  std::vector<std::vector<McEstimate>> grid(static_cast<std::size_t>(kmax),
                                            std::vector<McEstimate>(static_cast<std::size_t>(lmax) + 1));
  const double tn = static_cast<double>(trials);
  for (int k = 1; k <= kmax; ++k) {
    for (int l = 0; l <= lmax; ++l) {
      auto sample = [&](std::size_t t) {
        const Complex a = traces[t * stride + static_cast<std::size_t>(k - 1)];
        return l == 0 ? a : a * std::conj(traces[t * stride + static_cast<std::size_t>(l - 1)]);
      };
      Complex mean = 0.0;
      for (std::size_t t = 0; t < trials; ++t) mean += sample(t);
      mean /= tn;
      double ss = 0.0;
      for (std::size_t t = 0; t < trials; ++t) ss += std::norm(sample(t) - mean);
      grid[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)] =
          McEstimate{mean, std::sqrt(ss / (tn * (tn - 1.0))), trials};
    }
  }
  return grid;
}

McEstimate mc_trace_moment(const MomentQuery& q, std::size_t trials, std::uint64_t seed, unsigned threads) {
  q.validate();
  if (trials < 1000) throw std::invalid_argument("mc_trace_moment: need at least 1000 trials");
  auto grid = mc_trace_moment_grid(q.n, q.k, q.l, trials, seed, threads);
  return grid[static_cast<std::size_t>(q.k - 1)][static_cast<std::size_t>(q.l)];
}

nlohmann::json to_json(const MomentResult& r) {
  nlohmann::json j = {{"n", r.query.n},
                      {"k", r.query.k},
                      {"l", r.query.l},
                      {"exact", {r.exact.value.num, r.exact.value.den}},
                      {"exact_str", r.exact.value.to_string()},
                      {"exact_value", r.exact.value.value()},
                      {"method", r.exact.method == MomentMethod::enumeration ? "enumeration" : "wick"},
                      {"prediction", r.prediction}};
  if (r.mc) {
    j["mc"] = {{"mean", {r.mc->mean.real(), r.mc->mean.imag()}}, {"se", r.mc->se}, {"trials", r.mc->trials}};
  } else {
    j["mc"] = nullptr;
  }
  return j;
}

}  // namespace centro
