#include "ownref/ownership/exact.hpp"

#include "ownref/logic/error.hpp"

#include <algorithm>
#include <map>

namespace ownref::ownership::exact {

namespace {

using Entry = std::pair<int, Rational>;
using Row = std::vector<Entry>;   // sorted by column

const Rational* find(const Row& r, int col) {
  auto it = std::lower_bound(r.begin(), r.end(), col,
                             [](const Entry& e, int c) { return e.first < c; });
  return it != r.end() && it->first == col ? &it->second : nullptr;
}

// r -= f * p
void axpy(Row& r, const Rational& f, const Row& p) {
  Row out;
  out.reserve(r.size() + p.size());
  auto i = r.begin();
  auto j = p.begin();
  while (i != r.end() || j != p.end()) {
    if (j == p.end() || (i != r.end() && i->first < j->first)) {
      out.push_back(std::move(*i++));
    } else if (i == r.end() || j->first < i->first) {
      out.emplace_back(j->first, -f * j->second);
      ++j;
    } else {
      Rational v = i->second - f * j->second;
      if (v != 0) out.emplace_back(i->first, std::move(v));
      ++i;
      ++j;
    }
  }
  r = std::move(out);
}

// Bounded-variable primal simplex over exact rationals, Bland's rule.
class Simplex {
public:
  // Columns: structural [0, n), then one slack per >= row, then one artificial per row.
  Simplex(const System& s, const std::set<int>& zero) : n_(static_cast<int>(s.vars.size())) {
    std::vector<std::pair<Row, Rational>> rows;
    std::vector<bool> ge;
    for (const auto& c : s.constraints) {
      if (c.kind == Constraint::Kind::ZeroImplies) continue;
      std::map<int, Rational> coef;
      Rational rhs = 0;
      auto put = [&](const Term& t, int sign) {
        if (t.is_var())
          coef[t.var] += sign;
        else
          rhs -= sign * t.constant;
      };
      put(c.a, 1);
      if (c.kind == Constraint::Kind::Sum) {
        put(c.b, -1);
        put(c.c, -1);
      } else {
        put(c.b, -1);
      }
      Row r;
      for (auto& [v, k] : coef)
        if (k != 0) r.emplace_back(v, k);
      if (r.empty()) {
        bool ok = c.kind == Constraint::Kind::Geq ? 0 >= rhs : rhs == 0;
        if (!ok) trivially_infeasible_ = true;
        continue;
      }
      rows.emplace_back(std::move(r), std::move(rhs));
      ge.push_back(c.kind == Constraint::Kind::Geq);
    }

    int slacks = static_cast<int>(std::count(ge.begin(), ge.end(), true));
    m_ = static_cast<int>(rows.size());
    art0_ = n_ + slacks;
    cols_ = art0_ + m_;
    upper_.assign(static_cast<std::size_t>(cols_), std::nullopt);
    for (int j = 0; j < n_; ++j) upper_[j] = zero.count(j) ? Rational(0) : Rational(1);
    value_.assign(static_cast<std::size_t>(cols_), 0);
    at_upper_.assign(static_cast<std::size_t>(cols_), false);
    is_basic_.assign(static_cast<std::size_t>(cols_), false);

    int slack = n_;
    for (int i = 0; i < m_; ++i) {
      auto& [r, rhs] = rows[static_cast<std::size_t>(i)];
      if (ge[static_cast<std::size_t>(i)]) r.emplace_back(slack++, -1);   // a - s = rhs
      int sign = rhs >= 0 ? 1 : -1;
      if (sign < 0) {
        for (auto& e : r) e.second = -e.second;
        rhs = -rhs;
      }
      r.emplace_back(art0_ + i, 1);
      rows_.push_back(std::move(r));
      basic_.push_back(art0_ + i);
      is_basic_[static_cast<std::size_t>(art0_ + i)] = true;
      value_[static_cast<std::size_t>(art0_ + i)] = rhs;
    }
    alive_.assign(static_cast<std::size_t>(m_), true);
  }

  bool phase1() {
    if (trivially_infeasible_) return false;
    std::vector<Rational> c(static_cast<std::size_t>(cols_), 0);
    for (int j = art0_; j < cols_; ++j) c[j] = -1;
    iterate(c);
    for (int j = art0_; j < cols_; ++j)
      if (value_[j] != 0) return false;
    // Drive artificials out of the basis, dropping redundant rows.
    for (int i = 0; i < m_; ++i) {
      if (!alive_[i] || basic_[i] < art0_) continue;
      int q = -1;
      for (const auto& [j, a] : rows_[i])
        if (j < art0_ && !is_basic_[j] && a != 0) {
          q = j;
          break;
        }
      if (q < 0) {
        alive_[i] = false;
        is_basic_[basic_[i]] = false;
        continue;
      }
      pivot(i, q, nullptr);
    }
    for (int j = art0_; j < cols_; ++j) upper_[j] = Rational(0);
    return true;
  }

  void maximize(const std::set<int>& objective) {
    std::vector<Rational> c(static_cast<std::size_t>(cols_), 0);
    for (int v : objective) c[v] = 1;
    iterate(c);
  }

  Assignment point() const { return Assignment(value_.begin(), value_.begin() + n_); }

private:
  int n_, m_ = 0, art0_ = 0, cols_ = 0;
  bool trivially_infeasible_ = false;
  std::vector<Row> rows_;
  std::vector<int> basic_;
  std::vector<bool> alive_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<Rational> value_;
  std::vector<bool> at_upper_;
  std::vector<bool> is_basic_;

  void iterate(const std::vector<Rational>& c) {
    // d_j = c_j - sum_i c_B(i) a_ij
    std::vector<Rational> d = c;
    for (int i = 0; i < m_; ++i) {
      if (!alive_[i]) continue;
      const Rational& cb = c[basic_[i]];
      if (cb == 0) continue;
      for (const auto& [j, a] : rows_[i]) d[j] -= cb * a;
    }
    for (;;) {
      int q = -1;
      for (int j = 0; j < cols_; ++j) {
        if (is_basic_[j] || d[j] == 0) continue;
        if (upper_[j] && *upper_[j] == 0) continue;
        if ((d[j] > 0 && !at_upper_[j]) || (d[j] < 0 && at_upper_[j])) {
          q = j;
          break;
        }
      }
      if (q < 0) return;
      int dir = at_upper_[q] ? -1 : 1;

      std::optional<Rational> best;
      int leave_row = -1;      // -1: bound flip
      int leave_var = q;
      if (upper_[q]) best = *upper_[q];
      for (int i = 0; i < m_; ++i) {
        if (!alive_[i]) continue;
        const Rational* a = find(rows_[i], q);
        if (!a) continue;
        int b = basic_[i];
        Rational rate = -*a * dir;   // change of x_b per unit step
        std::optional<Rational> lim;
        if (rate < 0)
          lim = value_[b] / -rate;
        else if (upper_[b])
          lim = (*upper_[b] - value_[b]) / rate;
        if (!lim) continue;
        if (!best || *lim < *best || (*lim == *best && b < leave_var)) {
          best = *lim;
          leave_row = i;
          leave_var = b;
        }
      }
      if (!best) throw Error("ownership LP is unbounded");
      Rational t = *best;
      if (t != 0) {
        for (int i = 0; i < m_; ++i) {
          if (!alive_[i]) continue;
          if (const Rational* a = find(rows_[i], q)) value_[basic_[i]] -= *a * dir * t;
        }
        value_[q] += dir * t;
      }
      if (leave_row < 0) {
        at_upper_[q] = !at_upper_[q];
        continue;
      }
      pivot(leave_row, q, &d);
    }
  }

  void pivot(int r, int q, std::vector<Rational>* d) {
    int leaving = basic_[r];
    Rational a = *find(rows_[r], q);
    for (auto& e : rows_[r]) e.second /= a;
    const Row& pr = rows_[r];
    for (int i = 0; i < m_; ++i) {
      if (i == r || !alive_[i]) continue;
      if (const Rational* f = find(rows_[i], q)) {
        Rational k = *f;
        axpy(rows_[i], k, pr);
      }
    }
    if (d && (*d)[q] != 0) {
      Rational k = (*d)[q];
      for (const auto& [j, v] : pr) (*d)[j] -= k * v;
    }
    is_basic_[leaving] = false;
    at_upper_[leaving] = upper_[leaving] && value_[leaving] == *upper_[leaving] &&
                         *upper_[leaving] != 0;
    is_basic_[q] = true;
    at_upper_[q] = false;
    basic_[r] = q;
  }
};

} // namespace

std::optional<Assignment> optimize(const System& s, const std::set<int>& zero,
                                   const std::set<int>& objective) {
  Simplex sx(s, zero);
  if (!sx.phase1()) return std::nullopt;
  sx.maximize(objective);
  return sx.point();
}

std::optional<Assignment> max_support(const System& s) {
  const int n = static_cast<int>(s.vars.size());
  std::set<int> zero;
  for (;;) {
    std::set<int> positive;
    std::vector<Assignment> points;
    std::set<int> open;
    for (int v = 0; v < n; ++v)
      if (!zero.count(v)) open.insert(v);
    do {
      auto x = optimize(s, zero, open);
      if (!x) return std::nullopt;
      std::set<int> found;
      for (int v : open)
        if ((*x)[v] > 0) found.insert(v);
      points.push_back(std::move(*x));
      if (found.empty()) {
        zero.insert(open.begin(), open.end());
        open.clear();
      } else {
        for (int v : found) open.erase(v);
        positive.insert(found.begin(), found.end());
      }
    } while (!open.empty());

    bool changed = false;
    for (const auto& c : s.constraints) {
      if (c.kind != Constraint::Kind::ZeroImplies) continue;
      if (zero.count(c.a.var) && !zero.count(c.b.var)) {
        zero.insert(c.b.var);
        changed = true;
      }
    }
    if (changed) continue;

    Assignment avg(static_cast<std::size_t>(n), 0);
    for (const auto& p : points)
      for (int v = 0; v < n; ++v) avg[v] += p[v];
    for (auto& v : avg) {
      v /= static_cast<long>(points.size());
      v.canonicalize();
    }
    return avg;
  }
}

bool feasible(const System& s) { return max_support(s).has_value(); }

} // namespace ownref::ownership::exact
