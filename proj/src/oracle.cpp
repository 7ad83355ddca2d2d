#include "rieszgen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rieszgen::oracle {

namespace {

void require_size(const FiniteProbSpace& space, std::size_t n) {
  if (n != space.size()) throw std::invalid_argument("oracle: size does not match the outcome count");
}

constexpr std::uint64_t kChunk = 4096;

struct Moments {
  std::vector<std::uint64_t> count;
  std::vector<double> sum;
  std::vector<double> sum_sq;

  explicit Moments(std::size_t blocks) : count(blocks), sum(blocks), sum_sq(blocks) {}
  void merge(const Moments& o) {
    for (std::size_t b = 0; b < count.size(); ++b) {
      count[b] += o.count[b];
      sum[b] += o.sum[b];
      sum_sq[b] += o.sum_sq[b];
    }
  }
};

}  // namespace

FiniteProbSpace from_triple(const ConditionalTriple& triple) {
  FiniteProbSpace space;
  double total = 0.0;
  for (double w : triple.weights()) total += w;
  for (std::size_t i = 0; i < triple.dim(); ++i) {
    space.outcomes.push_back("w" + std::to_string(i));
    space.probs.push_back(triple.weights()[i] / total);
  }
  for (const auto& block : triple.partition()) space.sigma_blocks.push_back(block);
  return space;
}

Element cond_expect(const FiniteProbSpace& space, const RandomVariable& rv) {
  require_size(space, rv.size());
  std::vector<double> out(space.size());
  for (const auto& block : space.sigma_blocks) {
    double mass = 0.0;
    double acc = 0.0;
    for (std::size_t w : block) {
      mass += space.probs[w];
      acc += space.probs[w] * rv[w];
    }
    for (std::size_t w : block) out[w] = acc / mass;
  }
  return Element(std::move(out));
}

double expect(const FiniteProbSpace& space, const RandomVariable& rv) {
  require_size(space, rv.size());
  double acc = 0.0;
  for (std::size_t w = 0; w < space.size(); ++w) acc += space.probs[w] * rv[w];
  return acc;
}

double prob(const FiniteProbSpace& space, const Event& event) {
  require_size(space, event.size());
  double acc = 0.0;
  for (std::size_t w = 0; w < space.size(); ++w) {
    if (event[w]) acc += space.probs[w];
  }
  return acc;
}

Element cond_prob(const FiniteProbSpace& space, const Event& event) {
  RandomVariable rv(event.size());
  for (std::size_t w = 0; w < event.size(); ++w) rv[w] = event[w] ? 1.0 : 0.0;
  return cond_expect(space, rv);
}

Event level_event(const RandomVariable& x, double level) {
  Event ev(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) ev[w] = x[w] == level;
  return ev;
}

Event geq_event(const RandomVariable& x, double level) {
  Event ev(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) ev[w] = x[w] >= level;
  return ev;
}

Event leq_event(const RandomVariable& x, double level) {
  Event ev(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) ev[w] = x[w] <= level;
  return ev;
}

Event gt_event(const RandomVariable& x, double level) {
  Event ev(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) ev[w] = x[w] > level;
  return ev;
}

std::vector<Element> distribution(const FiniteProbSpace& space, const RandomVariable& x) {
  double top = 0.0;
  for (double v : x) top = std::max(top, v);
  std::vector<Element> out;
  for (unsigned k = 0; k <= static_cast<unsigned>(top); ++k) out.push_back(cond_prob(space, level_event(x, k)));
  return out;
}

Element genfun(const FiniteProbSpace& space, const RandomVariable& x, double s) {
  RandomVariable rv(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) {
    double v = 1.0;
    for (int j = 0; j < static_cast<int>(x[w]); ++j) v *= s;
    rv[w] = v;
  }
  return cond_expect(space, rv);
}

Element factorial_moment(const FiniteProbSpace& space, const RandomVariable& x, unsigned n) {
  RandomVariable rv(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) {
    double v = 1.0;
    for (unsigned j = 0; j < n; ++j) v *= x[w] - j;
    rv[w] = v;
  }
  return cond_expect(space, rv);
}

Element cond_variance(const FiniteProbSpace& space, const RandomVariable& x) {
  const Element m = cond_expect(space, x);
  RandomVariable dev(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) dev[w] = (x[w] - m[w]) * (x[w] - m[w]);
  return cond_expect(space, dev);
}

RandomVariable random_sum(const RandomVariable& N, const std::vector<RandomVariable>& xs) {
  RandomVariable out(N.size(), 0.0);
  for (std::size_t w = 0; w < N.size(); ++w) {
    const auto n = static_cast<std::size_t>(N[w]);
    if (n > xs.size()) throw std::invalid_argument("oracle: not enough summands for N");
    for (std::size_t k = 0; k < n; ++k) out[w] += xs[k][w];
  }
  return out;
}

bool independent(const FiniteProbSpace& space, const std::vector<Event>& events, double tol) {
  if (events.size() > 20) throw std::invalid_argument("oracle: too many events");
  std::vector<Element> single;
  for (const auto& ev : events) single.push_back(cond_prob(space, ev));
  for (std::uint32_t mask = 1; mask < (1u << events.size()); ++mask) {
    Event joint(space.size(), true);
    std::vector<double> product(space.size(), 1.0);
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (!(mask >> i & 1u)) continue;
      for (std::size_t w = 0; w < space.size(); ++w) {
        joint[w] = joint[w] && events[i][w];
        product[w] *= single[i][w];
      }
    }
    const Element lhs = cond_prob(space, joint);
    for (std::size_t w = 0; w < space.size(); ++w) {
      if (std::fabs(lhs[w] - product[w]) > tol) return false;
    }
  }
  return true;
}

double binomial_pmf(unsigned n, double p, unsigned k) {
  if (k > n) return 0.0;
  // log C(n,k) + k log p + (n-k) log(1-p), in long double
  long double lc = std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
                   std::lgamma(static_cast<long double>(n - k) + 1);
  long double v = lc;
  if (k > 0) v += k * std::log(static_cast<long double>(p));
  if (n > k) v += (n - k) * std::log1p(-static_cast<long double>(p));
  return static_cast<double>(std::exp(v));
}

double poisson_pmf(double g, unsigned k) {
  long double v = -static_cast<long double>(g) - std::lgamma(static_cast<long double>(k) + 1);
  if (k > 0) v += k * std::log(static_cast<long double>(g));
  return static_cast<double>(std::exp(v));
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

SimulationResult simulate(const FiniteProbSpace& space, const RandomVariable& rv, std::uint64_t samples,
                          std::uint64_t seed, unsigned workers) {
  require_size(space, rv.size());
  if (samples == 0) throw std::invalid_argument("simulate requires samples >= 1");
  std::vector<double> cumulative(space.size());
  double acc = 0.0;
  for (std::size_t w = 0; w < space.size(); ++w) cumulative[w] = acc += space.probs[w];
  std::vector<std::size_t> block_of(space.size());
  for (std::size_t b = 0; b < space.sigma_blocks.size(); ++b) {
    for (std::size_t w : space.sigma_blocks[b]) block_of[w] = b;
  }
  const std::size_t blocks = space.sigma_blocks.size();
  // Sums are taken relative to a per-block shift for stable variances.
  std::vector<double> shift(blocks);
  for (std::size_t b = 0; b < blocks; ++b) shift[b] = rv[space.sigma_blocks[b].front()];
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  const std::uint64_t key = splitmix64(seed);

  std::vector<Moments> partial(chunks, Moments(blocks));
  auto run_chunk = [&](std::uint64_t c) {
    Moments& m = partial[c];
    const std::uint64_t end = std::min(samples, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      const double u = static_cast<double>(splitmix64(key ^ splitmix64(i)) >> 11) * 0x1.0p-53 * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const std::size_t w = std::min<std::size_t>(it - cumulative.begin(), space.size() - 1);
      const std::size_t b = block_of[w];
      const double dev = rv[w] - shift[b];
      ++m.count[b];
      m.sum[b] += dev;
      m.sum_sq[b] += dev * dev;
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks)));
  if (n_workers == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t c = t; c < chunks; c += n_workers) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }
  Moments total(blocks);
  for (const auto& m : partial) total.merge(m);

  const Element exact = cond_expect(space, rv);
  SimulationResult r;
  r.samples = samples;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::uint64_t n = total.count[b];
    const double mean_dev = n ? total.sum[b] / n : 0.0;
    const double est = shift[b] + mean_dev;
    double var = n > 1 ? (total.sum_sq[b] - n * mean_dev * mean_dev) / (n - 1) : 0.0;
    if (var < 0.0) var = 0.0;
    const double se = n ? std::sqrt(var / n) : 0.0;
    const double truth = exact[space.sigma_blocks[b].front()];
    r.block_estimate.push_back(est);
    r.block_stderr.push_back(se);
    r.block_samples.push_back(n);
    r.excursion.push_back(n == 0 || std::fabs(est - truth) > 4.0 * se + 1e-12 * std::max(1.0, std::fabs(truth)));
  }
  return r;
}

}  // namespace rieszgen::oracle
