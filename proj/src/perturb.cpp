#include <algorithm>
#include <random>

#include "rulegraph/error.hpp"
#include "rulegraph/harness.hpp"

namespace rulegraph {

PerturbMode parse_perturb_mode(const std::string& s) {
  if (s == "drop") return PerturbMode::kDrop;
  if (s == "duplicate") return PerturbMode::kDuplicate;
  if (s == "shuffle") return PerturbMode::kShuffle;
  throw ValidationError("unknown perturbation mode '" + s + "'");
}

namespace {

// Fisher-Yates with an explicit index draw, so results do not depend on the
// standard library's shuffle.
template <class T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

// k distinct indices of [0, n), sorted.
std::vector<std::size_t> choose(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng() % (n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::vector<std::string> perturb(const std::vector<std::string>& lines, PerturbMode mode, double level,
                                 std::uint64_t seed) {
  if (!(level >= 0.0 && level <= 0.99)) throw ValidationError("perturbation level must lie in [0, 0.99]");
  std::mt19937_64 rng(seed);
  const std::size_t n = lines.size();
  const auto k = static_cast<std::size_t>(level * static_cast<double>(n));
  switch (mode) {
    case PerturbMode::kDrop: {
      const auto gone = choose(n, k, rng);
      std::vector<std::string> out;
      out.reserve(n - k);
      std::size_t g = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (g < gone.size() && gone[g] == i) {
          ++g;
          continue;
        }
        out.push_back(lines[i]);
      }
      return out;
    }
    case PerturbMode::kDuplicate: {
      // Each copy lands in a random gap of the original sequence.
      std::vector<std::pair<std::size_t, std::size_t>> extra;  // (gap, source)
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t src = rng() % n;
        extra.emplace_back(rng() % (n + 1), src);
      }
      std::stable_sort(extra.begin(), extra.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<std::string> out;
      out.reserve(n + k);
      std::size_t x = 0;
      for (std::size_t gap = 0; gap <= n; ++gap) {
        while (x < extra.size() && extra[x].first == gap) out.push_back(lines[extra[x++].second]);
        if (gap < n) out.push_back(lines[gap]);
      }
      return out;
    }
    case PerturbMode::kShuffle: {
      std::vector<std::string> out = lines;
      const auto chosen = choose(n, k, rng);
      std::vector<std::string> moved;
      for (std::size_t i : chosen) moved.push_back(lines[i]);
      shuffle_in_place(moved, rng);
      for (std::size_t j = 0; j < chosen.size(); ++j) out[chosen[j]] = std::move(moved[j]);
      return out;
    }
  }
  return lines;
}

}  // namespace rulegraph
