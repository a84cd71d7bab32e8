#include <deque>
#include <variant>

#include "rulegraph/pattern.hpp"

namespace rulegraph {
namespace {

// Epsilon-NFA over byte-set labels. Acyclic by construction.
struct Nfa {
  struct Edge {
    ByteSet label;
    std::size_t to;
  };
  std::vector<std::vector<Edge>> moves;
  std::vector<std::vector<std::size_t>> eps;
  std::size_t final = 0;

  std::size_t add() {
    moves.emplace_back();
    eps.emplace_back();
    return moves.size() - 1;
  }

  explicit Nfa(const Pattern& p) {
    std::size_t cur = add();
    for (const auto& u : p.units()) {
      const std::size_t end = add();
      if (const auto* lu = std::get_if<LiteralUnion>(&u)) {
        if (lu->optional) eps[cur].push_back(end);
        for (const auto& w : lu->strings) {
          std::size_t s = cur;
          for (std::size_t k = 0; k < w.size(); ++k) {
            const std::size_t t = k + 1 == w.size() ? end : add();
            ByteSet b;
            b.set(static_cast<unsigned char>(w[k]));
            moves[s].push_back({b, t});
            s = t;
          }
        }
      } else {
        const auto& rc = std::get<RepeatClass>(u);
        if (rc.optional) eps[cur].push_back(end);
        const ByteSet& m = class_members(rc.cls);
        std::size_t s = cur;
        for (std::uint32_t k = 1; k <= rc.max; ++k) {
          const std::size_t t = add();
          moves[s].push_back({m, t});
          if (k >= rc.min) eps[t].push_back(end);
          s = t;
        }
      }
      cur = end;
    }
    final = cur;
  }
};

bool product_nonempty(const Nfa& a, const Nfa& b) {
  const std::size_t nb = b.moves.size();
  std::vector<char> seen(a.moves.size() * nb, 0);
  std::deque<std::pair<std::size_t, std::size_t>> q;
  auto push = [&](std::size_t x, std::size_t y) {
    const std::size_t k = x * nb + y;
    if (!seen[k]) {
      seen[k] = 1;
      q.emplace_back(x, y);
    }
  };
  push(0, 0);
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    if (x == a.final && y == b.final) return true;
    for (std::size_t t : a.eps[x]) push(t, y);
    for (std::size_t t : b.eps[y]) push(x, t);
    for (const auto& ea : a.moves[x])
      for (const auto& eb : b.moves[y])
        if ((ea.label & eb.label).any()) push(ea.to, eb.to);
  }
  return false;
}

}  // namespace

bool intersects(const Pattern& a, const Pattern& b) {
  if (auto la = a.literal_value()) return matches(b, *la);
  if (auto lb = b.literal_value()) return matches(a, *lb);
  if (a == b) return true;
  if (min_length(a) > max_length(b) || min_length(b) > max_length(a)) return false;
  return product_nonempty(Nfa(a), Nfa(b));
}

}  // namespace rulegraph
