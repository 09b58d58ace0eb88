#include "recmc/generators.hpp"

#include <sstream>
#include <vector>

#include "recmc/error.hpp"

namespace recmc {

std::string bebop_rpl(int n, bool safe) {
  if (n < 1) throw Error(ErrorKind::ValidationError, "bebop needs at least one level");
  std::ostringstream out;
  out << "; bebop family, " << n << (n == 1 ? " level" : " levels") << (safe ? "" : ", unsafe variant") << "\n";
  out << "(program\n  (mode bool)\n";
  out << "  (procedure Main (in x) (out y) (local z)\n    (body (and (call P1 x z) (call P1 z y))))\n";
  for (int i = 1; i < n; ++i)
    out << "  (procedure P" << i << " (in a) (out b) (local c)\n    (body (and (call P" << i + 1 << " a c) (call P"
        << i + 1 << " c b))))\n";
  out << "  (procedure P" << n << " (in a) (out b) (local)\n    (body (= b (not a))))\n";
  out << "  (main Main)\n";
  out << "  (assert-safe " << (safe ? "(= y x)" : "(not (= y x))") << "))\n";
  return out.str();
}

SourceUnit gen_bebop(int n, bool safe) { return parse_rpl(bebop_rpl(n, safe)); }

std::string gpdr_divergence_rpl() {
  return "; L counts x, y and i up together from 0; G adds one.\n"
         "(program\n"
         "  (mode int)\n"
         "  (procedure M (in y0) (out y) (local x n)\n"
         "    (body (and (call L n x y0 n) (call G x y) (> n 0))))\n"
         "  (procedure L (in n) (out x y i) (local x0 y0 i0)\n"
         "    (body (or (and (= i 0) (= x 0) (= y 0))\n"
         "              (and (call L n x0 y0 i0) (= x (+ x0 1)) (= y (+ y0 1)) (= i (+ i0 1)) (> i 0)))))\n"
         "  (procedure G (in x0) (out x1) (local)\n"
         "    (body (= x1 (+ x0 1))))\n"
         "  (main M)\n"
         "  (assert-safe (<= y0 y)))\n";
}

SourceUnit gen_gpdr_divergence() { return parse_rpl(gpdr_divergence_rpl()); }

namespace {

struct ProcShape {
  std::string name;
  std::vector<std::string> inputs, outputs, locals;
  std::vector<std::string> formals() const {
    std::vector<std::string> f = inputs;
    f.insert(f.end(), outputs.begin(), outputs.end());
    return f;
  }
};

class RandomWriter {
 public:
  RandomWriter(std::uint64_t seed, Sort mode) : g_(seed), mode_(mode) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(g_); }

  template <typename T>
  const T& any(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  std::string literal(const std::vector<std::string>& vars) {
    if (mode_ == Sort::Bool) {
      const std::string& v = any(vars);
      if (coin(0.3)) {
        const std::string& w = any(vars);
        return coin() ? "(= " + v + " " + w + ")" : "(= " + v + " (not " + w + "))";
      }
      return coin() ? v : "(not " + v + ")";
    }
    if (mode_ == Sort::Int && coin(0.1)) return "(divides " + std::to_string(pick(2, 3)) + " " + term(vars) + ")";
    static const std::vector<std::string> ops{"<", "<=", "=", ">=", ">"};
    std::string rhs = coin(0.6) ? any(vars) : std::to_string(pick(-3, 3));
    if (coin(0.3)) rhs = "(+ " + rhs + " " + std::to_string(pick(-2, 2)) + ")";
    return "(" + any(ops) + " " + term(vars) + " " + rhs + ")";
  }

 private:
  std::string term(const std::vector<std::string>& vars) {
    const std::string& v = any(vars);
    int c = pick(-2, 2);
    std::string t = c == 0 || c == 1 ? v : "(* " + std::to_string(c) + " " + v + ")";
    if (coin(0.3)) t = "(+ " + t + " " + any(vars) + ")";
    return t;
  }

  std::mt19937_64 g_;
  Sort mode_;
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += " " + x;
  return s;
}

}  // namespace

std::string random_program_rpl(std::uint64_t seed, Sort mode, const RandomProgramShape& shape) {
  RandomWriter w(seed, mode);
  const int nprocs = w.pick(1, shape.max_procs);
  std::vector<ProcShape> procs;
  for (int p = 0; p < nprocs; ++p) {
    ProcShape ps;
    ps.name = "P" + std::to_string(p);
    int nformals = w.pick(2, shape.max_formals);
    int nin = w.pick(1, nformals - 1);
    for (int i = 0; i < nformals; ++i) (i < nin ? ps.inputs : ps.outputs).push_back("v" + std::to_string(i));
    int nlocals = w.pick(0, shape.max_locals);
    for (int i = 0; i < nlocals; ++i) ps.locals.push_back("l" + std::to_string(i));
    procs.push_back(ps);
  }

  std::ostringstream out;
  out << "; random program, seed " << seed << "\n(program\n  (mode " << sort_name(mode) << ")\n";
  for (const auto& ps : procs) {
    std::vector<std::string> scope = ps.formals();
    scope.insert(scope.end(), ps.locals.begin(), ps.locals.end());
    const int npaths = w.pick(1, shape.max_paths);
    std::vector<std::string> paths;
    for (int k = 0; k < npaths; ++k) {
      std::vector<std::string> parts;
      // Main always calls, so n = 0 decides nothing; every other procedure
      // has a call-free first path.
      const bool is_main = &ps == &procs[0] && procs.size() > 1;
      const int ncalls = is_main ? w.pick(1, shape.max_calls) : k == 0 ? 0 : w.pick(0, shape.max_calls);
      for (int c = 0; c < ncalls; ++c) {
        const ProcShape& callee = is_main ? procs[static_cast<std::size_t>(w.pick(1, nprocs - 1))] : w.any(procs);
        std::string call = "(call " + callee.name;
        for (std::size_t a = 0; a < callee.formals().size(); ++a) call += " " + w.any(scope);
        parts.push_back(call + ")");
      }
      const int nlits = w.pick(ncalls == 0 ? 1 : 0, shape.max_literals);
      for (int l = 0; l < nlits; ++l) parts.push_back(w.literal(scope));
      paths.push_back(parts.size() == 1 ? parts[0] : "(and" + join(parts) + ")");
    }
    out << "  (procedure " << ps.name << " (in" << join(ps.inputs) << ") (out" << join(ps.outputs) << ") (local"
        << join(ps.locals) << ")\n    (body " << (paths.size() == 1 ? paths[0] : "(or" + join(paths) + ")") << "))\n";
  }
  std::vector<std::string> prop;
  for (int k = w.pick(1, 3); k > 0; --k) prop.push_back(w.literal(procs[0].formals()));
  out << "  (main P0)\n  (assert-safe " << (prop.size() == 1 ? prop[0] : "(or" + join(prop) + ")") << "))\n";
  return out.str();
}

SourceUnit random_program(std::uint64_t seed, Sort mode, const RandomProgramShape& shape) {
  return parse_rpl(random_program_rpl(seed, mode, shape));
}

}  // namespace recmc
