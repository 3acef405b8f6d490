#include "liftlab/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <utility>

namespace liftlab {

namespace {

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr std::array<FunctionName, 8> kFunctions{{
    {"sin", Op::sin},
    {"cos", Op::cos},
    {"tan", Op::tan},
    {"exp", Op::exp},
    {"log", Op::log},
    {"sinh", Op::sinh},
    {"cosh", Op::cosh},
    {"sqrt", Op::sqrt},
}};

bool is_unary(Op op) { return op >= Op::neg && op <= Op::sqrt; }

const char* op_symbol(Op op) {
  switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "^";
    default: return "?";
  }
}

std::string_view function_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "?";
}

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = v;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->index = index;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& names) : src_(src), names_(names) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "empty expression");
    NodePtr root = sum();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::add, lhs, product());
      } else if (accept('-')) {
        lhs = make_binary(Op::sub, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Op::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Op::neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError(start, "malformed number");
    return make_constant(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    for (const auto& f : kFunctions) {
      if (f.name == name) {
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != '(')
          throw ParseError(pos_, "expected '(' after function '" + std::string(name) + "'");
        ++pos_;
        NodePtr arg = sum();
        expect(')');
        return make_unary(f.op, arg);
      }
    }
    if (name == "pi") return make_constant(std::numbers::pi);

    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return make_variable(static_cast<int>(i));

    // x7 on a 2-dimensional chart: right family, wrong index
    std::size_t split = name.size();
    while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
    if (split > 0 && split < name.size()) {
      const std::string_view family = name.substr(0, split);
      for (const auto& known : names_) {
        if (known.size() > family.size() && known.compare(0, family.size(), family) == 0 &&
            std::isdigit(static_cast<unsigned char>(known[family.size()])))
          throw ParseError(start, "variable index out of range: '" + std::string(name) + "'");
      }
    }
    throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

bool has_variables(const Node& n) {
  if (n.op == Op::variable) return true;
  if (n.lhs && has_variables(*n.lhs)) return true;
  if (n.rhs && has_variables(*n.rhs)) return true;
  return false;
}

bool references(const Node& n, int index) {
  if (n.op == Op::variable) return n.index == index;
  if (n.lhs && references(*n.lhs, index)) return true;
  if (n.rhs && references(*n.rhs, index)) return true;
  return false;
}

void compile(const Node& n, const std::vector<std::string>& names, std::vector<Instr>& tape,
             int depth, int& max_depth) {
  switch (n.op) {
    case Op::constant:
      tape.push_back({Op::constant, n.value, -1, false, &n});
      max_depth = std::max(max_depth, depth + 1);
      return;
    case Op::variable:
      tape.push_back({Op::variable, 0.0, n.index, false, &n});
      max_depth = std::max(max_depth, depth + 1);
      return;
    case Op::pow:
      if (!has_variables(*n.rhs)) {
        compile(*n.lhs, names, tape, depth, max_depth);
        Expr exponent(n.rhs, std::make_shared<const std::vector<std::string>>(names));
        const double c = exponent.eval<double>(std::span<const double>());
        tape.push_back({Op::pow, c, -1, true, &n});
        return;
      }
      break;
    default:
      break;
  }
  if (is_unary(n.op)) {
    compile(*n.lhs, names, tape, depth, max_depth);
    tape.push_back({n.op, 0.0, -1, false, &n});
    return;
  }
  compile(*n.lhs, names, tape, depth, max_depth);
  compile(*n.rhs, names, tape, depth + 1, max_depth);
  tape.push_back({n.op, 0.0, -1, false, &n});
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0.0) return "(" + s + ")";
  return s;
}

}  // namespace

Expr::Expr(NodePtr root, std::shared_ptr<const std::vector<std::string>> names)
    : root_(std::move(root)), names_(std::move(names)) {
  int depth = 0;
  compile(*root_, *names_, tape_, 0, depth);
  max_stack_ = depth;
}

bool Expr::independent_of(int index) const { return !references(*root_, index); }

std::string Expr::to_string() const { return node_to_string(*root_, *names_); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return a.variable_names() == b.variable_names() && structurally_equal(a.root(), b.root());
}

std::shared_ptr<const std::vector<std::string>> chart_names(int dim) {
  auto v = std::make_shared<std::vector<std::string>>();
  for (int i = 1; i <= dim; ++i) v->push_back("x" + std::to_string(i));
  return v;
}

std::shared_ptr<const std::vector<std::string>> bundle_names(int dim) {
  auto v = std::make_shared<std::vector<std::string>>();
  for (int i = 1; i <= dim; ++i) v->push_back("x" + std::to_string(i));
  for (int i = 1; i <= dim; ++i) v->push_back("y" + std::to_string(i));
  return v;
}

Expr parse(std::string_view source, std::shared_ptr<const std::vector<std::string>> names) {
  Parser p(source, *names);
  return Expr(p.run(), std::move(names));
}

Expr parse(std::string_view source, int dim) {
  if (dim < 1) throw ParseError(0, "dimension must be positive");
  return parse(source, chart_names(dim));
}

Expr constant_expr(double value, int dim) { return Expr(make_constant(value), chart_names(dim)); }

std::string node_to_string(const Node& n, const std::vector<std::string>& names) {
  switch (n.op) {
    case Op::constant: return format_number(n.value);
    case Op::variable: return names.at(n.index);
    case Op::neg: return "(-" + node_to_string(*n.lhs, names) + ")";
    default: break;
  }
  if (is_unary(n.op)) return std::string(function_name(n.op)) + "(" + node_to_string(*n.lhs, names) + ")";
  return "(" + node_to_string(*n.lhs, names) + " " + op_symbol(n.op) + " " +
         node_to_string(*n.rhs, names) + ")";
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::constant) return a.value == b.value;
  if (a.op == Op::variable) return a.index == b.index;
  if (!structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs || b.rhs) return a.rhs && b.rhs && structurally_equal(*a.rhs, *b.rhs);
  return true;
}

void throw_domain(const Node* node, const std::vector<std::string>& names, const std::string& what) {
  throw DomainError(what + " in '" + node_to_string(*node, names) + "'");
}

double eval(const Expr& e, std::span<const double> point) {
  if (static_cast<int>(point.size()) != e.dim())
    throw GeometryError("evaluation point has " + std::to_string(point.size()) +
                        " coordinates, expression expects " + std::to_string(e.dim()));
  return e.eval<double>(point);
}

double derivative(const Expr& e, std::span<const double> point, int wrt_i) {
  if (static_cast<int>(point.size()) != e.dim() || wrt_i < 0 || wrt_i >= e.dim())
    throw GeometryError("derivative: index or point dimension out of range");
  std::vector<Dual<double>> x(point.begin(), point.end());
  x[wrt_i].d = 1.0;
  return e.eval<Dual<double>>(x).d;
}

double derivative(const Expr& e, std::span<const double> point, int wrt_i, int wrt_j) {
  if (static_cast<int>(point.size()) != e.dim() || wrt_i < 0 || wrt_i >= e.dim() || wrt_j < 0 ||
      wrt_j >= e.dim())
    throw GeometryError("derivative: index or point dimension out of range");
  using D2 = Dual<Dual<double>>;
  std::vector<D2> x;
  x.reserve(point.size());
  for (std::size_t k = 0; k < point.size(); ++k) {
    const double inner = static_cast<int>(k) == wrt_j ? 1.0 : 0.0;
    const double outer = static_cast<int>(k) == wrt_i ? 1.0 : 0.0;
    x.push_back(D2(Dual<double>(point[k], inner), Dual<double>(outer, 0.0)));
  }
  return e.eval<D2>(x).d.d;
}

}  // namespace liftlab
