#include "mpf/viterbi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpf::hmm {

void EmissionMatrix::push_back(std::vector<double> column, std::vector<std::size_t> contributors) {
  if (columns_.empty() && templates_ == 0) templates_ = column.size();
  if (column.size() != templates_) throw std::invalid_argument("emission column has the wrong length");
  columns_.push_back(std::move(column));
  contributors_.push_back(std::move(contributors));
}

namespace {

void check_step(std::span<const double> prev, std::span<const double> emission, std::span<double> next,
                std::span<std::size_t> back) {
  if (prev.empty() || prev.size() != emission.size() || next.size() != prev.size() || back.size() != prev.size()) {
    throw std::invalid_argument("viterbi step: mismatched column sizes");
  }
}

}  // namespace

void viterbi_step_naive(std::span<const double> prev, std::span<const double> emission,
                        const TransitionModel& model, std::span<double> next, std::span<std::size_t> back) {
  check_step(prev, emission, next, back);
  const std::size_t n = prev.size();
  for (std::size_t k = 0; k < n; ++k) {
    double best = prev[0] + model(0, k);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < n; ++j) {
      const double v = prev[j] + model(j, k);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    next[k] = best + emission[k];
    back[k] = arg;
  }
}

void viterbi_step_banded(std::span<const double> prev, std::span<const double> emission,
                         const TransitionModel& model, std::span<double> next, std::span<std::size_t> back) {
  check_step(prev, emission, next, back);
  const std::size_t n = prev.size();
  const long long sn = static_cast<long long>(n);
  const double penalty = model.penalty();

  // Out-of-band candidate values, and the best of every prefix [0, i) and
  // suffix [i, n). Both keep the smallest index among equal values.
  std::vector<double> penalized(n);
  for (std::size_t j = 0; j < n; ++j) penalized[j] = prev[j] + penalty;
  std::vector<std::size_t> prefix(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cur = prefix[i];
    prefix[i + 1] = (cur == n || penalized[i] > penalized[cur]) ? i : cur;
  }
  std::vector<std::size_t> suffix(n + 1, n);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t cur = suffix[i + 1];
    suffix[i] = (cur == n || penalized[i] >= penalized[cur]) ? i : cur;
  }

  for (std::size_t k = 0; k < n; ++k) {
    // In-band predecessors j satisfy min_offset <= k - j <= max_offset.
    const long long lo = std::max(0LL, static_cast<long long>(k) - model.max_offset);
    const long long hi = std::min(sn - 1, static_cast<long long>(k) - model.min_offset);

    double best = 0.0;
    std::size_t arg = n;
    const auto offer = [&](double v, std::size_t j) {
      if (arg == n || v > best) {
        best = v;
        arg = j;
      }
    };
    // Visit candidates in increasing index order so strict '>' keeps the smallest index.
    if (lo > hi) {
      // Empty band: every predecessor is out of band.
      offer(penalized[prefix[n]], prefix[n]);
    } else {
      if (lo > 0) offer(penalized[prefix[static_cast<std::size_t>(lo)]], prefix[static_cast<std::size_t>(lo)]);
      for (long long j = lo; j <= hi; ++j) offer(prev[static_cast<std::size_t>(j)] + 0.0, static_cast<std::size_t>(j));
      if (hi + 1 < sn) {
        const std::size_t s = suffix[static_cast<std::size_t>(hi + 1)];
        offer(penalized[s], s);
      }
    }
    next[k] = best + emission[k];
    back[k] = arg;
  }
}

ViterbiResult viterbi_decode(const EmissionMatrix& emissions, const TransitionModel& model) {
  model.validate();
  const std::size_t n = emissions.templates();
  const std::size_t tau = emissions.length();
  if (tau == 0 || n == 0) throw std::invalid_argument("viterbi_decode: empty emission matrix");
  for (std::size_t t = 0; t < tau; ++t) {
    for (double v : emissions.column(t)) {
      if (!std::isfinite(v)) throw std::invalid_argument("viterbi_decode: non-finite emission entry");
    }
  }

  ViterbiResult r;
  r.scores.assign(tau, std::vector<double>(n));
  r.backpointers.assign(tau, std::vector<std::size_t>(n, 0));
  const auto first = emissions.column(0);
  std::copy(first.begin(), first.end(), r.scores[0].begin());
  for (std::size_t t = 1; t < tau; ++t) {
    viterbi_step_banded(r.scores[t - 1], emissions.column(t), model, r.scores[t], r.backpointers[t]);
  }

  const auto& last = r.scores[tau - 1];
  const auto terminal = static_cast<std::size_t>(std::max_element(last.begin(), last.end()) - last.begin());
  r.score = last[terminal];
  r.path.assign(tau, 0);
  r.path[tau - 1] = terminal;
  for (std::size_t t = tau - 1; t > 0; --t) r.path[t - 1] = r.backpointers[t][r.path[t]];
  return r;
}

}  // namespace mpf::hmm
