#include "rdm/lp.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <sstream>

#include "rdm/error.hpp"

namespace rdm {

std::size_t LinearModel::add_variable(std::string name, Rational lower, Rational upper,
                                      bool integral, Rational objective) {
  variables_.push_back({std::move(name), std::move(lower), std::move(upper), integral,
                        std::move(objective)});
  return variables_.size() - 1;
}

std::size_t LinearModel::add_constraint(std::string name,
                                        std::vector<std::pair<std::size_t, Rational>> terms,
                                        Sense sense, Rational rhs) {
  constraints_.push_back({std::move(name), std::move(terms), sense, std::move(rhs)});
  return constraints_.size() - 1;
}

LinearModel LinearModel::relaxed() const {
  LinearModel out = *this;
  for (auto& v : out.variables_) v.integral = false;
  return out;
}

void LinearModel::validate() const {
  for (const auto& v : variables_) {
    if (v.lower > v.upper) {
      throw Error(ErrorCode::invalid_argument, "variable " + v.name + " has lower > upper");
    }
  }
  for (const auto& c : constraints_) {
    for (const auto& [var, _] : c.terms) {
      if (var >= variables_.size()) {
        throw Error(ErrorCode::invalid_argument,
                    "constraint " + c.name + " references an undeclared variable");
      }
    }
  }
}

namespace {

struct Entry {
  std::size_t col;
  Rational val;
};

using SparseRow = std::vector<Entry>;

const Rational* find_entry(const SparseRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  if (it == row.end() || it->col != col) return nullptr;
  return &it->val;
}

// row <- row - factor * pivot
void axpy(SparseRow& row, const Rational& factor, const SparseRow& pivot) {
  SparseRow out;
  out.reserve(row.size() + pivot.size());
  auto a = row.begin();
  auto b = pivot.begin();
  while (a != row.end() || b != pivot.end()) {
    if (b == pivot.end() || (a != row.end() && a->col < b->col)) {
      out.push_back(std::move(*a++));
    } else if (a == row.end() || b->col < a->col) {
      out.push_back({b->col, -factor * b->val});
      ++b;
    } else {
      Rational v = a->val - factor * b->val;
      if (sgn(v) != 0) out.push_back({a->col, std::move(v)});
      ++a;
      ++b;
    }
  }
  row = std::move(out);
}

// Bounded-variable primal simplex on  A y = b, 0 <= y <= U (U may be
// infinite), with an initial feasible basis supplied by the caller.
class Simplex {
 public:
  static constexpr std::uint64_t kIterationLimit = 50'000'000;

  std::vector<SparseRow> rows;
  std::vector<std::optional<Rational>> upper;  // nullopt = +inf
  std::vector<bool> enterable;
  std::vector<std::size_t> basis;
  std::vector<long> row_of;  // -1 if nonbasic
  std::vector<bool> at_upper;
  std::vector<Rational> beta;
  std::uint64_t iterations = 0;

  std::size_t columns() const { return upper.size(); }

  void reset_costs(const std::vector<Rational>& cost) {
    d_ = cost;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational& cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (const auto& e : rows[i]) d_[e.col] -= cb * e.val;
    }
  }

  void run() {
    while (true) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < columns(); ++j) {
        if (row_of[j] >= 0 || !enterable[j]) continue;
        if (upper[j] && sgn(*upper[j]) == 0) continue;
        int s = sgn(d_[j]);
        if ((!at_upper[j] && s < 0) || (at_upper[j] && s > 0)) {
          entering = j;
          break;
        }
      }
      if (!entering) return;
      if (++iterations > kIterationLimit) {
        throw Error(ErrorCode::limit, "simplex iteration limit exceeded");
      }
      step(*entering);
    }
  }

  Rational value(std::size_t j) const {
    if (row_of[j] >= 0) return beta[static_cast<std::size_t>(row_of[j])];
    return at_upper[j] ? *upper[j] : Rational(0);
  }

 private:
  void step(std::size_t j) {
    const int dir = at_upper[j] ? -1 : 1;
    std::vector<std::pair<std::size_t, Rational>> column;  // (row, dir * alpha)
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (const Rational* a = find_entry(rows[i], j)) column.emplace_back(i, dir * *a);
    }

    std::optional<Rational> best;
    std::size_t best_var = 0;
    std::optional<std::size_t> best_row;
    auto offer = [&](const Rational& ratio, std::size_t var, std::optional<std::size_t> row) {
      if (!best || ratio < *best || (ratio == *best && var < best_var)) {
        best = ratio;
        best_var = var;
        best_row = row;
      }
    };
    if (upper[j]) offer(*upper[j], j, std::nullopt);
    for (const auto& [i, delta] : column) {
      std::size_t var = basis[i];
      if (sgn(delta) > 0) {
        offer(beta[i] / delta, var, i);
      } else if (upper[var]) {
        offer((*upper[var] - beta[i]) / -delta, var, i);
      }
    }
    if (!best) throw Error(ErrorCode::invalid_argument, "linear model is unbounded");

    const Rational t = *best;
    if (sgn(t) != 0) {
      for (const auto& [i, delta] : column) beta[i] -= delta * t;
    }
    if (!best_row) {
      at_upper[j] = !at_upper[j];
      return;
    }

    const std::size_t r = *best_row;
    const std::size_t leaving = basis[r];
    Rational delta_r;
    for (const auto& [i, delta] : column) {
      if (i == r) delta_r = delta;
    }
    at_upper[leaving] = sgn(delta_r) < 0;
    row_of[leaving] = -1;
    Rational entering_value = dir > 0 ? t : *upper[j] - t;

    Rational pivot = *find_entry(rows[r], j);
    for (auto& e : rows[r]) e.val /= pivot;
    const SparseRow& prow = rows[r];
    for (const auto& [i, delta] : column) {
      if (i == r) continue;
      Rational factor = dir * delta;  // the original alpha_ij
      axpy(rows[i], factor, prow);
    }
    Rational dj = d_[j];
    if (sgn(dj) != 0) {
      for (const auto& e : prow) d_[e.col] -= dj * e.val;
    }
    basis[r] = j;
    row_of[j] = static_cast<long>(r);
    beta[r] = entering_value;
  }

  std::vector<Rational> d_;
};

void audit(const LinearModel& model, const LinearSolution& s) {
  if (!s.optimal()) return;
  if (!satisfies(model, s.values)) {
    throw Error(ErrorCode::internal, "solver audit failed: solution violates the model");
  }
  Rational obj = 0;
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    obj += model.variable(j).objective * s.values[j];
  }
  if (obj != s.objective) throw Error(ErrorCode::internal, "solver audit failed: objective");
}

}  // namespace

LinearSolution solve_lp(const LinearModel& model) {
  model.validate();
  const std::size_t n = model.variable_count();
  const std::size_t m = model.constraint_count();

  Simplex sx;
  sx.rows.resize(m);
  sx.basis.assign(m, 0);
  std::vector<Rational> rhs(m);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = model.variable(j);
    sx.upper.emplace_back(v.upper - v.lower);
    sx.enterable.push_back(true);
  }

  // Structural part, shifted so every variable has lower bound 0.
  std::vector<int> slack_sign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = model.constraints()[i];
    std::map<std::size_t, Rational> merged;
    for (const auto& [var, coeff] : c.terms) merged[var] += coeff;
    rhs[i] = c.rhs;
    for (auto& [var, coeff] : merged) {
      if (sgn(coeff) == 0) continue;
      rhs[i] -= coeff * model.variable(var).lower;
      sx.rows[i].push_back({var, coeff});
    }
    if (c.sense == Sense::greater_equal) slack_sign[i] = -1;
    if (c.sense == Sense::less_equal) slack_sign[i] = 1;
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (slack_sign[i] != 0) {
      sx.rows[i].push_back({sx.upper.size(), Rational(slack_sign[i])});
      sx.upper.emplace_back(std::nullopt);
      sx.enterable.push_back(true);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(rhs[i]) < 0) {
      rhs[i] = -rhs[i];
      for (auto& e : sx.rows[i]) e.val = -e.val;
    }
  }
  sx.row_of.assign(sx.upper.size(), -1);

  // Initial basis: a +1 slack where available, an artificial otherwise.
  std::vector<bool> is_artificial(sx.upper.size(), false);
  for (std::size_t i = 0; i < m; ++i) {
    std::optional<std::size_t> slack;
    for (const auto& e : sx.rows[i]) {
      if (e.col >= n && e.val == 1) slack = e.col;
    }
    if (slack) {
      sx.basis[i] = *slack;
    } else {
      std::size_t col = sx.upper.size();
      sx.rows[i].push_back({col, Rational(1)});
      sx.upper.emplace_back(std::nullopt);
      sx.enterable.push_back(true);
      sx.row_of.push_back(-1);
      is_artificial.push_back(true);
      sx.basis[i] = col;
    }
    sx.row_of[sx.basis[i]] = static_cast<long>(i);
  }
  sx.at_upper.assign(sx.upper.size(), false);
  sx.beta = rhs;

  LinearSolution out;
  out.stats.nodes = 1;

  const std::size_t total = sx.upper.size();
  std::vector<Rational> cost(total);
  bool has_artificial = false;
  for (std::size_t j = 0; j < total; ++j) {
    if (is_artificial[j]) {
      cost[j] = 1;
      has_artificial = true;
    }
  }
  if (has_artificial) {
    sx.reset_costs(cost);
    sx.run();
    Rational infeasibility = 0;
    for (std::size_t j = 0; j < total; ++j) {
      if (is_artificial[j]) infeasibility += sx.value(j);
    }
    if (sgn(infeasibility) > 0) {
      out.status = SolveStatus::infeasible;
      out.stats.iterations = sx.iterations;
      return out;
    }
    for (std::size_t j = 0; j < total; ++j) {
      if (is_artificial[j]) {
        sx.upper[j] = Rational(0);
        sx.enterable[j] = false;
      }
    }
  }

  std::fill(cost.begin(), cost.end(), Rational(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = model.variable(j).objective;
  sx.reset_costs(cost);
  sx.run();

  out.status = SolveStatus::optimal;
  out.basic = true;
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = model.variable(j).lower + sx.value(j);
    out.objective += model.variable(j).objective * out.values[j];
  }
  out.stats.iterations = sx.iterations;
  audit(model, out);
  return out;
}

namespace {

Rational fractionality(const Rational& v) {
  // distance of frac(v) from 1/2; smaller means more fractional
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  Rational frac = v - Rational(fl);
  return abs(frac - Rational(1, 2));
}

struct Node {
  Rational bound;
  std::uint64_t seq;
  std::vector<Rational> lower, upper;
  LinearSolution lp;
};

struct NodeOrder {
  bool operator()(const Node* a, const Node* b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->seq > b->seq;
  }
};

}  // namespace

LinearSolution solve_mip(const LinearModel& model, const MipOptions& options) {
  model.validate();
  const auto ints = integral_variables(model);
  LinearModel work = model;
  SolveStats stats;

  auto evaluate = [&](const std::vector<Rational>& lo, const std::vector<Rational>& hi) {
    if (stats.nodes >= options.node_limit) {
      throw Error(ErrorCode::limit, "branch-and-bound node limit (" +
                                        std::to_string(options.node_limit) + ") exceeded");
    }
    for (std::size_t j = 0; j < work.variable_count(); ++j) {
      work.variable(j).lower = lo[j];
      work.variable(j).upper = hi[j];
    }
    LinearSolution s = solve_lp(work);
    ++stats.nodes;
    stats.iterations += s.stats.iterations;
    return s;
  };

  std::vector<Rational> lo, hi;
  for (const auto& v : model.variables()) {
    lo.push_back(v.lower);
    hi.push_back(v.upper);
  }
  // Integral variables take integral bounds.
  for (auto j : ints) {
    mpz_class c, f;
    mpz_cdiv_q(c.get_mpz_t(), lo[j].get_num_mpz_t(), lo[j].get_den_mpz_t());
    mpz_fdiv_q(f.get_mpz_t(), hi[j].get_num_mpz_t(), hi[j].get_den_mpz_t());
    lo[j] = Rational(c);
    hi[j] = Rational(f);
    if (lo[j] > hi[j]) {
      LinearSolution out;
      out.stats = stats;
      return out;
    }
  }

  std::optional<LinearSolution> incumbent;
  std::vector<std::unique_ptr<Node>> storage;
  std::priority_queue<Node*, std::vector<Node*>, NodeOrder> open;
  std::uint64_t seq = 0;

  auto consider = [&](std::vector<Rational> l, std::vector<Rational> h) {
    LinearSolution s = evaluate(l, h);
    if (!s.optimal()) return;
    if (incumbent && s.objective >= incumbent->objective) return;
    if (is_integral(s, ints)) {
      incumbent = std::move(s);
      return;
    }
    auto node = std::make_unique<Node>();
    node->bound = s.objective;
    node->seq = seq++;
    node->lower = std::move(l);
    node->upper = std::move(h);
    node->lp = std::move(s);
    open.push(node.get());
    storage.push_back(std::move(node));
  };

  consider(lo, hi);
  while (!open.empty()) {
    Node* node = open.top();
    open.pop();
    if (incumbent && node->bound >= incumbent->objective) continue;

    std::optional<std::size_t> branch;
    Rational best_score;
    for (auto j : ints) {
      const Rational& v = node->lp.values[j];
      if (is_integer(v)) continue;
      Rational score = fractionality(v);
      if (!branch || score < best_score) {
        branch = j;
        best_score = score;
      }
    }
    const Rational& v = node->lp.values[*branch];
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());

    auto down_hi = node->upper;
    down_hi[*branch] = Rational(fl);
    auto up_lo = node->lower;
    up_lo[*branch] = Rational(fl + 1);
    consider(node->lower, std::move(down_hi));
    consider(std::move(up_lo), node->upper);
  }

  LinearSolution out;
  if (incumbent) {
    out = std::move(*incumbent);
    audit(model, out);
  }
  out.stats = stats;
  return out;
}

bool is_integral(const LinearSolution& solution, const std::vector<std::size_t>& variables) {
  return std::all_of(variables.begin(), variables.end(),
                     [&](std::size_t j) { return is_integer(solution.values.at(j)); });
}

std::vector<std::size_t> integral_variables(const LinearModel& model) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    if (model.variable(j).integral) out.push_back(j);
  }
  return out;
}

bool satisfies(const LinearModel& model, const std::vector<Rational>& values) {
  if (values.size() != model.variable_count()) return false;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const auto& v = model.variable(j);
    if (values[j] < v.lower || values[j] > v.upper) return false;
  }
  for (const auto& c : model.constraints()) {
    Rational lhs = 0;
    for (const auto& [var, coeff] : c.terms) lhs += coeff * values[var];
    switch (c.sense) {
      case Sense::greater_equal:
        if (lhs < c.rhs) return false;
        break;
      case Sense::less_equal:
        if (lhs > c.rhs) return false;
        break;
      case Sense::equal:
        if (lhs != c.rhs) return false;
        break;
    }
  }
  return true;
}

namespace {

void write_linear(std::ostream& out, const std::vector<std::pair<std::size_t, Rational>>& terms,
                  const LinearModel& model) {
  bool first = true;
  for (const auto& [var, coeff] : terms) {
    if (sgn(coeff) == 0) continue;
    Rational mag = abs(coeff);
    if (first) {
      out << (sgn(coeff) < 0 ? "-" : "");
    } else {
      out << (sgn(coeff) < 0 ? " - " : " + ");
    }
    if (mag != 1) out << to_decimal_string(mag) << ' ';
    out << model.variable(var).name;
    first = false;
  }
  if (first) out << '0';
}

}  // namespace

std::string to_lp_format(const LinearModel& model) {
  std::ostringstream out;
  out << "\\ rdm linear model: " << model.variable_count() << " variables, "
      << model.constraint_count() << " constraints\n";
  out << "Minimize\n obj: ";
  std::vector<std::pair<std::size_t, Rational>> obj;
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    obj.emplace_back(j, model.variable(j).objective);
  }
  write_linear(out, obj, model);
  out << "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    out << ' ' << c.name << ": ";
    write_linear(out, c.terms, model);
    switch (c.sense) {
      case Sense::greater_equal: out << " >= "; break;
      case Sense::less_equal: out << " <= "; break;
      case Sense::equal: out << " = "; break;
    }
    out << to_decimal_string(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.lower == v.upper) {
      out << ' ' << v.name << " = " << to_decimal_string(v.lower) << '\n';
    } else {
      out << ' ' << to_decimal_string(v.lower) << " <= " << v.name
          << " <= " << to_decimal_string(v.upper) << '\n';
    }
  }
  auto ints = integral_variables(model);
  if (!ints.empty()) {
    out << "General\n";
    for (auto j : ints) out << ' ' << model.variable(j).name << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace rdm
