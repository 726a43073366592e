#include "cosetlab/macdstx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "cosetlab/kernels.hpp"
#include "cosetlab/parallel.hpp"
#include "cosetlab/rng.hpp"

namespace cosetlab::macdstx {

namespace {

constexpr double kCostSlack = 1e-9;
constexpr double kImprovementTol = 1e-12;
constexpr int kSweepCap = 60;

struct Shape {
  std::size_t x1, x2, s1, s2, y;
};

Shape require_dstx_shape(const channels::ChannelModel& ch) {
  if (ch.input_dims.size() != 2 || ch.state_dims.size() != 2 ||
      ch.output_dims.size() != 1 || ch.cost_fns.size() != 2 || !ch.state_law)
    throw std::invalid_argument(
        "expected a two-encoder channel with two state components, one "
        "output terminal, two cost functions and a state law");
  return Shape{ch.input_dims[0], ch.input_dims[1], ch.state_dims[0],
               ch.state_dims[1], ch.output_dims[0]};
}

// Work buffers sized for aux <= 4, states <= 4, outputs <= 4.
constexpr std::size_t kMaxAux = 4;
constexpr std::size_t kMaxStates = 4;
constexpr std::size_t kMaxOut = 4;

// One encoder's conditional law P(U|S) as stick-breaking coordinates in
// [0,1]^(S_j*(aux-1)); rows are decoded on demand.
struct LawCoords {
  double theta[2][kMaxStates * (kMaxAux - 1)];
  std::size_t count[2] = {0, 0};  // live coordinates per encoder

  double& at(std::size_t enc, std::size_t c) { return theta[enc][c]; }
  double at(std::size_t enc, std::size_t c) const { return theta[enc][c]; }
};

void decode_row(const double* theta, std::size_t aux, double* row) {
  double rest = 1.0;
  for (std::size_t u = 0; u + 1 < aux; ++u) {
    row[u] = rest * theta[u];
    rest -= row[u];
  }
  row[aux - 1] = std::max(0.0, rest);
}

struct Evaluator {
  const channels::ChannelModel* ch = nullptr;
  Shape sh{};
  std::size_t aux = 0;
  double ps_joint[kMaxStates * kMaxStates];  // P(s1, s2)
  double ps1[kMaxStates], ps2[kMaxStates];   // marginal state laws
  double hs_threshold = 0.0;                 // cost budget tau

  // decoded laws, filled by load()
  double law[2][kMaxStates * kMaxAux];  // [enc][s * aux + u]
  const std::uint8_t* xmap[2] = {nullptr, nullptr};  // [u * S + s] -> x

  // scratch
  double p_uuy[kMaxAux * kMaxAux * kMaxOut];
  double p_y[kMaxOut];
  double p_uu[kMaxAux * kMaxAux];
  double p_u[2][kMaxAux];
  double p_wy[kMaxAux * kMaxOut];

  void init(const channels::ChannelModel& c, std::size_t aux_size,
            double tau) {
    ch = &c;
    sh = require_dstx_shape(c);
    aux = aux_size;
    hs_threshold = tau;
    const auto& sl = *c.state_law;
    for (std::size_t i = 0; i < sh.s1 * sh.s2; ++i) ps_joint[i] = sl[i];
    for (std::size_t s = 0; s < sh.s1; ++s) ps1[s] = 0.0;
    for (std::size_t s = 0; s < sh.s2; ++s) ps2[s] = 0.0;
    for (std::size_t a = 0; a < sh.s1; ++a)
      for (std::size_t b = 0; b < sh.s2; ++b) {
        ps1[a] += ps_joint[a * sh.s2 + b];
        ps2[b] += ps_joint[a * sh.s2 + b];
      }
  }

  void load(const LawCoords& lc, const std::uint8_t* m1,
            const std::uint8_t* m2) {
    xmap[0] = m1;
    xmap[1] = m2;
    const std::size_t states[2] = {sh.s1, sh.s2};
    for (std::size_t e = 0; e < 2; ++e)
      for (std::size_t s = 0; s < states[e]; ++s)
        decode_row(lc.theta[e] + s * (aux - 1), aux, law[e] + s * aux);
  }

  // Fills p_uuy and p_y, returns false when the cost constraint fails.
  bool build_output_stats() {
    const std::size_t nuuy = aux * aux * sh.y;
    std::fill(p_uuy, p_uuy + nuuy, 0.0);
    double cost1 = 0.0, cost2 = 0.0;
    for (std::size_t u1 = 0; u1 < aux; ++u1)
      for (std::size_t s1 = 0; s1 < sh.s1; ++s1) {
        const double a1 = law[0][s1 * aux + u1];
        if (a1 == 0.0) continue;
        const std::size_t x1 = xmap[0][u1 * sh.s1 + s1];
        for (std::size_t u2 = 0; u2 < aux; ++u2) {
          double* slot = p_uuy + (u1 * aux + u2) * sh.y;
          for (std::size_t s2 = 0; s2 < sh.s2; ++s2) {
            const double w =
                ps_joint[s1 * sh.s2 + s2] * a1 * law[1][s2 * aux + u2];
            if (w == 0.0) continue;
            const std::size_t x2 = xmap[1][u2 * sh.s2 + s2];
            const std::size_t cell = x1 * sh.x2 + x2;
            cost1 += w * ch->cost_fns[0][cell];
            cost2 += w * ch->cost_fns[1][cell];
            const std::size_t row = cell * sh.s1 * sh.s2 + s1 * sh.s2 + s2;
            const double* wr = ch->rows[row].data();
            for (std::size_t y = 0; y < sh.y; ++y) slot[y] += w * wr[y];
          }
        }
      }
    if (cost1 > hs_threshold + kCostSlack || cost2 > hs_threshold + kCostSlack)
      return false;
    for (std::size_t y = 0; y < sh.y; ++y) p_y[y] = 0.0;
    for (std::size_t uu = 0; uu < aux * aux; ++uu)
      for (std::size_t y = 0; y < sh.y; ++y) p_y[y] += p_uuy[uu * sh.y + y];
    return true;
  }

  // [I(U1,U2;Y) - I(U1;S1) - I(U2;S2)]^+, or negative infinity when the
  // cost constraint fails.
  double iid_objective() {
    if (!build_output_stats()) return -HUGE_VAL;
    const std::size_t nuu = aux * aux;
    for (std::size_t uu = 0; uu < nuu; ++uu)
      p_uu[uu] = kernels::sum({p_uuy + uu * sh.y, sh.y});
    const double h_y = kernels::neg_plogp_sum({p_y, sh.y});
    const double h_uu = kernels::neg_plogp_sum({p_uu, nuu});
    const double h_uuy = kernels::neg_plogp_sum({p_uuy, nuu * sh.y});
    const double i_uuy = h_uu + h_y - h_uuy;

    double i_us = 0.0;
    const std::size_t states[2] = {sh.s1, sh.s2};
    const double* psm[2] = {ps1, ps2};
    for (std::size_t e = 0; e < 2; ++e) {
      double h_u_given_s = 0.0;
      for (std::size_t u = 0; u < aux; ++u) p_u[e][u] = 0.0;
      for (std::size_t s = 0; s < states[e]; ++s) {
        h_u_given_s +=
            psm[e][s] * kernels::neg_plogp_sum({law[e] + s * aux, aux});
        for (std::size_t u = 0; u < aux; ++u)
          p_u[e][u] += psm[e][s] * law[e][s * aux + u];
      }
      i_us += kernels::neg_plogp_sum({p_u[e], aux}) - h_u_given_s;
    }
    return std::max(0.0, i_uuy - i_us);
  }

  // [min_j H(U_j|S_j) - H(U1 + U2 | Y)]^+ with the sum in F_aux.
  double coset_objective() {
    if (!build_output_stats()) return -HUGE_VAL;
    const std::size_t states[2] = {sh.s1, sh.s2};
    const double* psm[2] = {ps1, ps2};
    double h_us[2];
    for (std::size_t e = 0; e < 2; ++e) {
      h_us[e] = 0.0;
      for (std::size_t s = 0; s < states[e]; ++s)
        h_us[e] +=
            psm[e][s] * kernels::neg_plogp_sum({law[e] + s * aux, aux});
    }
    std::fill(p_wy, p_wy + aux * sh.y, 0.0);
    for (std::size_t u1 = 0; u1 < aux; ++u1)
      for (std::size_t u2 = 0; u2 < aux; ++u2) {
        const std::size_t w = (u1 + u2) % aux;
        for (std::size_t y = 0; y < sh.y; ++y)
          p_wy[w * sh.y + y] += p_uuy[(u1 * aux + u2) * sh.y + y];
      }
    const double h_wy = kernels::neg_plogp_sum({p_wy, aux * sh.y});
    const double h_y = kernels::neg_plogp_sum({p_y, sh.y});
    return std::max(0.0, std::min(h_us[0], h_us[1]) - (h_wy - h_y));
  }
};

// ---------------------------------------------------------------------------
// deterministic input maps

using XMap = std::vector<std::uint8_t>;

std::vector<XMap> all_maps(std::size_t aux, std::size_t states,
                           std::size_t inputs) {
  const std::size_t cells = aux * states;
  std::size_t count = 1;
  for (std::size_t i = 0; i < cells; ++i) count *= inputs;
  std::vector<XMap> maps;
  maps.reserve(count);
  XMap m(cells, 0);
  for (std::size_t id = 0; id < count; ++id) {
    maps.push_back(m);
    for (std::size_t c = cells; c-- > 0;) {
      if (++m[c] < inputs) break;
      m[c] = 0;
    }
  }
  return maps;
}

XMap permute_u(const XMap& m, std::span<const std::uint8_t> perm,
               std::size_t states) {
  const std::size_t aux = perm.size();
  XMap out(m.size());
  for (std::size_t u = 0; u < aux; ++u)
    for (std::size_t s = 0; s < states; ++s)
      out[u * states + s] = m[perm[u] * states + s];
  return out;
}

std::vector<std::vector<std::uint8_t>> u_permutations(std::size_t aux) {
  std::vector<std::uint8_t> ident(aux);
  for (std::size_t i = 0; i < aux; ++i) ident[i] = static_cast<std::uint8_t>(i);
  std::vector<std::vector<std::uint8_t>> perms;
  do {
    perms.push_back(ident);
  } while (std::next_permutation(ident.begin(), ident.end()));
  return perms;
}

// Relabeling U never changes the iid objective, so one representative per
// permutation orbit suffices for each encoder.
std::vector<XMap> canonical_maps_iid(std::size_t aux, std::size_t states,
                                     std::size_t inputs) {
  const auto perms = u_permutations(aux);
  std::vector<XMap> keep;
  for (const XMap& m : all_maps(aux, states, inputs)) {
    bool canonical = true;
    for (const auto& p : perms)
      if (permute_u(m, p, states) < m) {
        canonical = false;
        break;
      }
    if (canonical) keep.push_back(m);
  }
  return keep;
}

// For the coset bound only a joint affine relabeling u -> a*u + b keeps
// the sum structure, so canonicalization acts on map pairs.
std::vector<std::pair<XMap, XMap>> canonical_map_pairs_coset(
    std::uint8_t q, std::size_t s1, std::size_t s2, std::size_t x1,
    std::size_t x2) {
  std::vector<std::vector<std::uint8_t>> affine;
  for (std::uint8_t a = 1; a < q; ++a)
    for (std::uint8_t b = 0; b < q; ++b) {
      std::vector<std::uint8_t> p(q);
      for (std::uint8_t u = 0; u < q; ++u)
        p[u] = static_cast<std::uint8_t>((a * u + b) % q);
      affine.push_back(std::move(p));
    }
  const auto m1s = all_maps(q, s1, x1);
  const auto m2s = s1 == s2 && x1 == x2 ? m1s : all_maps(q, s2, x2);
  std::vector<std::pair<XMap, XMap>> keep;
  for (const XMap& m1 : m1s)
    for (const XMap& m2 : m2s) {
      bool canonical = true;
      for (const auto& p : affine) {
        const XMap t1 = permute_u(m1, p, s1);
        if (t1 < m1 || (t1 == m1 && permute_u(m2, p, s2) < m2)) {
          canonical = false;
          break;
        }
      }
      if (canonical) keep.emplace_back(m1, m2);
    }
  return keep;
}

// ---------------------------------------------------------------------------
// multi-start coordinate ascent over the law coordinates

template <typename Objective>
double ascend(Evaluator& ev, LawCoords& lc, const std::uint8_t* m1,
              const std::uint8_t* m2, const Options& opt,
              const Objective& objective) {
  const auto eval = [&] {
    ev.load(lc, m1, m2);
    return objective(ev);
  };
  double best = eval();
  const std::size_t ncoord = lc.count[0] + lc.count[1];
  for (int sweep = 0; sweep < kSweepCap; ++sweep) {
    const double before = best;
    for (std::size_t c = 0; c < ncoord; ++c) {
      const std::size_t enc = c < lc.count[0] ? 0 : 1;
      const std::size_t k = c < lc.count[0] ? c : c - lc.count[0];
      double best_theta = lc.at(enc, k);
      // coarse pass over [0,1], then a fine pass around the winner
      for (double th = 0.0; th <= 1.0 + 1e-12; th += opt.coarse_step) {
        lc.at(enc, k) = std::min(th, 1.0);
        const double v = eval();
        if (v > best) {
          best = v;
          best_theta = lc.at(enc, k);
        }
      }
      const double lo = std::max(0.0, best_theta - opt.coarse_step);
      const double hi = std::min(1.0, best_theta + opt.coarse_step);
      for (double th = lo; th <= hi + 1e-12; th += opt.fine_step) {
        lc.at(enc, k) = std::min(th, 1.0);
        const double v = eval();
        if (v > best) {
          best = v;
          best_theta = lc.at(enc, k);
        }
      }
      lc.at(enc, k) = best_theta;
    }
    if (best - before <= kImprovementTol) break;
  }
  return best;
}

struct PairResult {
  double value = -HUGE_VAL;
  LawCoords coords{};
};

template <typename Objective>
PairResult optimize_pair(Evaluator& ev, const XMap& m1, const XMap& m2,
                         const Options& opt, std::uint64_t pair_index,
                         const Objective& objective) {
  PairResult out;
  for (int r = 0; r < opt.restarts; ++r) {
    CounterRng rng(opt.seed, (pair_index << 16) | static_cast<unsigned>(r));
    LawCoords lc{};
    lc.count[0] = (ev.aux - 1) * ev.sh.s1;
    lc.count[1] = (ev.aux - 1) * ev.sh.s2;
    for (std::size_t e = 0; e < 2; ++e)
      for (std::size_t k = 0; k < lc.count[e]; ++k)
        lc.at(e, k) = r == 0 ? 0.0 : rng.next_double();
    const double v = ascend(ev, lc, m1.data(), m2.data(), opt, objective);
    if (v > out.value) {
      out.value = v;
      out.coords = lc;
    }
  }
  return out;
}

TestChannel describe(const Evaluator& ev, const LawCoords& lc, const XMap& m1,
                     const XMap& m2) {
  TestChannel tc;
  tc.aux = ev.aux;
  const std::size_t states[2] = {ev.sh.s1, ev.sh.s2};
  const XMap* maps[2] = {&m1, &m2};
  for (std::size_t e = 0; e < 2; ++e) {
    tc.u_laws[e].resize(states[e] * ev.aux);
    for (std::size_t s = 0; s < states[e]; ++s)
      decode_row(lc.theta[e] + s * (ev.aux - 1), ev.aux,
                 tc.u_laws[e].data() + s * ev.aux);
    tc.x_maps[e] = *maps[e];
  }
  return tc;
}

template <typename Objective>
BoundResult run_bound(const channels::ChannelModel& ch, double tau,
                      std::size_t aux, const Options& opt,
                      const std::vector<std::pair<XMap, XMap>>& pairs,
                      const Objective& objective) {
  if (!(tau >= 0.0)) throw std::domain_error("tau must be nonnegative");
  BoundResult best;
  best.rate = 0.0;
  double best_value = -HUGE_VAL;
  Evaluator ev;
  ev.init(ch, aux, tau);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairResult r =
        optimize_pair(ev, pairs[i].first, pairs[i].second, opt, i, objective);
    if (r.value > best_value) {
      best_value = r.value;
      best.best = describe(ev, r.coords, pairs[i].first, pairs[i].second);
    }
  }
  best.rate = std::max(0.0, best_value);
  return best;
}

}  // namespace

BoundResult iid_sum_rate_ub(const channels::ChannelModel& ch, double tau,
                            std::size_t aux_size, const Options& opt) {
  const Shape sh = require_dstx_shape(ch);
  if (aux_size < 2 || aux_size > kMaxAux)
    throw std::invalid_argument("aux_size must lie in [2, 4]");
  if (sh.s1 > kMaxStates || sh.s2 > kMaxStates || sh.y > kMaxOut)
    throw std::invalid_argument("alphabet too large for the evaluator");
  const auto m1s = canonical_maps_iid(aux_size, sh.s1, sh.x1);
  const auto m2s = sh.s1 == sh.s2 && sh.x1 == sh.x2
                       ? m1s
                       : canonical_maps_iid(aux_size, sh.s2, sh.x2);
  std::vector<std::pair<XMap, XMap>> pairs;
  pairs.reserve(m1s.size() * m2s.size());
  for (const auto& a : m1s)
    for (const auto& b : m2s) pairs.emplace_back(a, b);
  return run_bound(ch, tau, aux_size, opt, pairs,
                   [](Evaluator& ev) { return ev.iid_objective(); });
}

BoundResult coset_sum_rate_lb(const channels::ChannelModel& ch, double tau,
                              std::uint8_t q, const Options& opt) {
  const Shape sh = require_dstx_shape(ch);
  if (q != 2 && q != 3)
    throw std::invalid_argument("coset bound supports q in {2, 3}");
  if (sh.s1 > kMaxStates || sh.s2 > kMaxStates || sh.y > kMaxOut)
    throw std::invalid_argument("alphabet too large for the evaluator");
  const auto pairs = canonical_map_pairs_coset(q, sh.s1, sh.s2, sh.x1, sh.x2);
  return run_bound(ch, tau, q, opt, pairs,
                   [](Evaluator& ev) { return ev.coset_objective(); });
}

std::vector<SweepRow> sweep_tau(const channels::ChannelModel& ch,
                                std::size_t grid_size, const Options& opt) {
  if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");
  require_dstx_shape(ch);
  std::vector<SweepRow> rows(grid_size);
  parallel_for(grid_size, [&](std::size_t i) {
    const double tau =
        0.5 * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    SweepRow r;
    r.tau = tau;
    r.iid_upper = iid_sum_rate_ub(ch, tau, 2, opt).rate;
    r.coset_lower = coset_sum_rate_lb(ch, tau, 2, opt).rate;
    rows[i] = r;
  });
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "tau,iid_upper,coset_lower\n";
  char buf[128];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", r.tau, r.iid_upper,
                  r.coset_lower);
    out += buf;
  }
  return out;
}

namespace {

channels::ChannelModel deterministic_dstx(
    const std::function<std::size_t(std::size_t, std::size_t, std::size_t,
                                    std::size_t)>& y_of) {
  channels::ChannelModel ch;
  ch.input_dims = {2, 2};
  ch.state_dims = {2, 2};
  ch.output_dims = {2};
  ch.rows.resize(16);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t s1 = 0; s1 < 2; ++s1)
        for (std::size_t s2 = 0; s2 < 2; ++s2) {
          const std::size_t r = ((x1 * 2 + x2) * 2 + s1) * 2 + s2;
          const std::size_t y = y_of(x1, x2, s1, s2);
          ch.rows[r] = {y == 0 ? 1.0 : 0.0, y == 1 ? 1.0 : 0.0};
        }
  ch.cost_fns = {{0.0, 0.0, 1.0, 1.0}, {0.0, 1.0, 0.0, 1.0}};
  ch.cost_budgets = {0.5, 0.5};
  ch.state_law = Pmf::uniform(4);
  return ch;
}

}  // namespace

channels::ChannelModel make_adder_channel() {
  return deterministic_dstx([](std::size_t x1, std::size_t x2, std::size_t,
                               std::size_t) { return x1 ^ x2; });
}

channels::ChannelModel make_doubly_dirty_channel() {
  return deterministic_dstx(
      [](std::size_t x1, std::size_t x2, std::size_t s1, std::size_t s2) {
        return x1 ^ x2 ^ s1 ^ s2;
      });
}

}  // namespace cosetlab::macdstx
