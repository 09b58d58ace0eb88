#include "simplex.hpp"

#include <algorithm>

namespace recmc::detail {

int Simplex::new_var() {
  vars_.emplace_back();
  return static_cast<int>(vars_.size()) - 1;
}

int Simplex::slack_for(const std::vector<std::pair<int, Rational>>& lin) {
  std::vector<std::pair<int, std::string>> key;
  key.reserve(lin.size());
  for (const auto& [v, a] : lin) key.emplace_back(v, a.get_str());
  std::sort(key.begin(), key.end());
  auto it = slack_index_.find(key);
  if (it != slack_index_.end()) return it->second;

  int s = new_var();
  Row row;
  DeltaRat val;
  for (const auto& [v, a] : lin) {
    val = val + vars_[v].value * a;
    if (vars_[v].basic) {
      for (const auto& [w, c] : rows_[v]) {
        Rational& slot = row[w];
        slot += a * c;
        if (slot == 0) row.erase(w);
      }
    } else {
      Rational& slot = row[v];
      slot += a;
      if (slot == 0) row.erase(v);
    }
  }
  vars_[s].basic = true;
  vars_[s].value = val;
  rows_[s] = std::move(row);
  slack_index_[key] = s;
  return s;
}

bool Simplex::assert_upper(int v, const DeltaRat& b, const BoundReason& why) {
  VarInfo& x = vars_[v];
  if (x.upper && *x.upper <= b) return true;
  if (x.lower && b < *x.lower) {
    std::map<int, Rational> acc;
    conflict_ids_.clear();
    add_conflict(acc, why, 1, true);
    add_conflict(acc, x.lower_why, 1, false);
    finish_conflict(acc);
    return false;
  }
  trail_.push_back({v, true, x.upper, x.upper_why});
  x.upper = b;
  x.upper_why = why;
  if (!x.basic && b < x.value) update(v, b);
  return true;
}

bool Simplex::assert_lower(int v, const DeltaRat& b, const BoundReason& why) {
  VarInfo& x = vars_[v];
  if (x.lower && b <= *x.lower) return true;
  if (x.upper && *x.upper < b) {
    std::map<int, Rational> acc;
    conflict_ids_.clear();
    add_conflict(acc, why, 1, false);
    add_conflict(acc, x.upper_why, 1, true);
    finish_conflict(acc);
    return false;
  }
  trail_.push_back({v, false, x.lower, x.lower_why});
  x.lower = b;
  x.lower_why = why;
  if (!x.basic && x.value < b) update(v, b);
  return true;
}

void Simplex::update(int nonbasic, const DeltaRat& v) {
  DeltaRat delta = v - vars_[nonbasic].value;
  for (auto& [b, row] : rows_) {
    auto it = row.find(nonbasic);
    if (it != row.end()) vars_[b].value = vars_[b].value + delta * it->second;
  }
  vars_[nonbasic].value = v;
}

void Simplex::pivot(int basic, int nonbasic) {
  Row row = std::move(rows_[basic]);
  rows_.erase(basic);
  Rational a = row[nonbasic];
  row.erase(nonbasic);
  Row fresh;
  fresh[basic] = 1 / a;
  for (const auto& [j, c] : row) fresh[j] = -c / a;

  for (auto& [b, r] : rows_) {
    auto it = r.find(nonbasic);
    if (it == r.end()) continue;
    Rational c = it->second;
    r.erase(it);
    for (const auto& [j, d] : fresh) {
      Rational& slot = r[j];
      slot += c * d;
      if (slot == 0) r.erase(j);
    }
  }
  rows_[nonbasic] = std::move(fresh);
  vars_[basic].basic = false;
  vars_[nonbasic].basic = true;
  ++pivots_;
}

void Simplex::pivot_and_update(int basic, int nonbasic, const DeltaRat& v) {
  const Rational a = rows_[basic].at(nonbasic);
  DeltaRat theta = (v - vars_[basic].value) * (1 / a);
  vars_[basic].value = v;
  vars_[nonbasic].value = vars_[nonbasic].value + theta;
  for (auto& [b, row] : rows_) {
    if (b == basic) continue;
    auto it = row.find(nonbasic);
    if (it != row.end()) vars_[b].value = vars_[b].value + theta * it->second;
  }
  pivot(basic, nonbasic);
}

void Simplex::add_conflict(std::map<int, Rational>& acc, const BoundReason& why,
                           const Rational& kappa, bool upper) {
  conflict_ids_.push_back(why.id);
  if (why.id < 0) return;
  Rational lambda = upper ? Rational(kappa / why.alpha) : Rational(-kappa / why.alpha);
  acc[why.id] += lambda;
}

void Simplex::finish_conflict(std::map<int, Rational>& acc) {
  conflict_.clear();
  for (auto& [id, l] : acc)
    if (l != 0) conflict_.emplace_back(id, l);
  std::sort(conflict_ids_.begin(), conflict_ids_.end());
  conflict_ids_.erase(std::unique(conflict_ids_.begin(), conflict_ids_.end()), conflict_ids_.end());
}

void Simplex::explain_row(int basic, bool below) {
  std::map<int, Rational> acc;
  conflict_ids_.clear();
  const VarInfo& b = vars_[basic];
  if (below)
    add_conflict(acc, b.lower_why, 1, false);
  else
    add_conflict(acc, b.upper_why, 1, true);
  for (const auto& [j, a] : rows_[basic]) {
    const VarInfo& x = vars_[j];
    bool use_upper = below ? a > 0 : a < 0;
    Rational kappa = a > 0 ? a : Rational(-a);
    add_conflict(acc, use_upper ? x.upper_why : x.lower_why, kappa, use_upper);
  }
  finish_conflict(acc);
}

bool Simplex::check(std::size_t pivot_budget) {
  exhausted_ = false;
  std::size_t steps = 0;
  for (;;) {
    int bad = -1;
    bool below = false;
    for (const auto& [b, row] : rows_) {
      const VarInfo& x = vars_[b];
      if (x.lower && x.value < *x.lower) {
        bad = b;
        below = true;
        break;
      }
      if (x.upper && *x.upper < x.value) {
        bad = b;
        below = false;
        break;
      }
    }
    if (bad < 0) return true;
    if (++steps > pivot_budget) {
      exhausted_ = true;
      conflict_.clear();
      conflict_ids_.clear();
      return false;
    }
    int entering = -1;
    for (const auto& [j, a] : rows_[bad]) {
      const VarInfo& x = vars_[j];
      bool can_increase = !x.upper || x.value < *x.upper;
      bool can_decrease = !x.lower || *x.lower < x.value;
      bool ok = below ? ((a > 0 && can_increase) || (a < 0 && can_decrease))
                      : ((a < 0 && can_increase) || (a > 0 && can_decrease));
      if (ok) {
        entering = j;
        break;
      }
    }
    if (entering < 0) {
      explain_row(bad, below);
      return false;
    }
    const VarInfo& x = vars_[bad];
    pivot_and_update(bad, entering, below ? *x.lower : *x.upper);
  }
}

void Simplex::push() { frames_.push_back(trail_.size()); }

void Simplex::pop(std::size_t n) {
  while (n-- > 0 && !frames_.empty()) {
    std::size_t mark = frames_.back();
    frames_.pop_back();
    while (trail_.size() > mark) {
      Undo u = std::move(trail_.back());
      trail_.pop_back();
      VarInfo& x = vars_[u.var];
      if (u.upper) {
        x.upper = std::move(u.bound);
        x.upper_why = u.why;
      } else {
        x.lower = std::move(u.bound);
        x.lower_why = u.why;
      }
    }
  }
}

std::vector<Rational> Simplex::concrete_values() const {
  Rational delta = 1;
  for (const auto& x : vars_) {
    const DeltaRat& v = x.value;
    if (x.lower && x.lower->r < v.r && x.lower->d > v.d)
      delta = std::min(delta, Rational((v.r - x.lower->r) / (x.lower->d - v.d)));
    if (x.upper && v.r < x.upper->r && v.d > x.upper->d)
      delta = std::min(delta, Rational((x.upper->r - v.r) / (v.d - x.upper->d)));
  }
  std::vector<Rational> out;
  out.reserve(vars_.size());
  for (const auto& x : vars_) out.push_back(x.value.r + x.value.d * delta);
  return out;
}

}  // namespace recmc::detail
