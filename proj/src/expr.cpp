#include "heis/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "heis/error.hpp"

namespace heis {

VariableSet::VariableSet(std::initializer_list<std::string_view> names) {
    for (auto n : names) names_.emplace_back(n);
}

const VariableSet& VariableSet::fields() {
    static const VariableSet v{"x1", "x2", "x3"};
    return v;
}
const VariableSet& VariableSet::curve() {
    static const VariableSet v{"t"};
    return v;
}
const VariableSet& VariableSet::chart() {
    static const VariableSet v{"s1", "s2"};
    return v;
}
const VariableSet& VariableSet::none() {
    static const VariableSet v{};
    return v;
}

int VariableSet::slot(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

struct FunctionName {
    std::string_view name;
    Op op;
};

constexpr std::array<FunctionName, 10> kFunctions{{
    {"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan}, {"exp", Op::Exp},
    {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"sinh", Op::Sinh}, {"cosh", Op::Cosh},
    {"atan", Op::Atan}, {"abs", Op::Abs},
}};

std::string_view function_name(Op op) {
    for (const auto& f : kFunctions)
        if (f.op == op) return f.name;
    return "?";
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string annotate(std::string_view src, std::size_t offset) {
    std::string out(src);
    out += '\n';
    out.append(std::min(offset, src.size()), ' ');
    out += '^';
    return out;
}

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Bad };

struct Token {
    Tok kind = Tok::End;
    std::size_t begin = 0;
    std::size_t end = 0;
    double number = 0.0;
};

class Parser {
public:
    Parser(std::string_view src, const VariableSet& vars) : src_(src), vars_(vars) { advance(); }

    std::vector<Node> run() {
        if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
            fail(0, "empty expression", {"number", "name", "'('", "'-'"});
        parse_expr();
        if (cur_.kind != Tok::End) fail(cur_.begin, "unexpected token", {"operator", "end of input"});
        return std::move(nodes_);
    }

private:
    [[noreturn]] void fail(std::size_t offset, const std::string& what,
                           std::vector<std::string> expected) const {
        std::string msg = what + " at offset " + std::to_string(offset);
        if (!expected.empty()) {
            msg += "; expected one of:";
            for (const auto& e : expected) msg += " " + e;
        }
        throw ParseError(msg + "\n" + annotate(src_, offset), offset, std::move(expected),
                         annotate(src_, offset));
    }

    void advance() {
        last_end_ = cur_.end;
        std::size_t i = pos_;
        while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\r' || src_[i] == '\n')) ++i;
        cur_ = Token{};
        cur_.begin = i;
        if (i >= src_.size()) {
            cur_.kind = Tok::End;
            cur_.end = pos_ = i;
            return;
        }
        const char c = src_[i];
        auto single = [&](Tok k) { cur_.kind = k; cur_.end = pos_ = i + 1; };
        switch (c) {
            case '+': return single(Tok::Plus);
            case '-': return single(Tok::Minus);
            case '*': return single(Tok::Star);
            case '/': return single(Tok::Slash);
            case '^': return single(Tok::Caret);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.')) ++j;
            if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
                if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
                    while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
                    j = k;
                }
            }
            double v = 0.0;
            const auto res = std::from_chars(src_.data() + i, src_.data() + j, v);
            if (res.ec != std::errc() || res.ptr != src_.data() + j) fail(i, "malformed number", {"number"});
            cur_.kind = Tok::Number;
            cur_.number = v;
            cur_.end = pos_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
            cur_.kind = Tok::Name;
            cur_.end = pos_ = j;
            return;
        }
        fail(i, std::string("invalid character '") + c + "'", {"number", "name", "operator", "'('", "')'"});
    }

    std::int32_t emit(Node n) {
        nodes_.push_back(n);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    std::int32_t emit_binary(Op op, std::int32_t l, std::int32_t r) {
        Node n;
        n.op = op;
        n.lhs = l;
        n.rhs = r;
        n.begin = nodes_[static_cast<std::size_t>(l)].begin;
        n.end = nodes_[static_cast<std::size_t>(r)].end;
        return emit(n);
    }

    std::int32_t parse_expr() {
        std::int32_t lhs = parse_term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            const Op op = cur_.kind == Tok::Plus ? Op::Add : Op::Sub;
            advance();
            lhs = emit_binary(op, lhs, parse_term());
        }
        return lhs;
    }

    std::int32_t parse_term() {
        std::int32_t lhs = parse_unary();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            const Op op = cur_.kind == Tok::Star ? Op::Mul : Op::Div;
            advance();
            lhs = emit_binary(op, lhs, parse_unary());
        }
        return lhs;
    }

    std::int32_t parse_unary() {
        if (cur_.kind == Tok::Minus) {
            const std::size_t b = cur_.begin;
            advance();
            const std::int32_t arg = parse_unary();
            Node n;
            n.op = Op::Neg;
            n.lhs = arg;
            n.begin = static_cast<std::uint32_t>(b);
            n.end = nodes_[static_cast<std::size_t>(arg)].end;
            return emit(n);
        }
        return parse_power();
    }

    std::int32_t parse_power() {
        std::int32_t base = parse_primary();
        while (cur_.kind == Tok::Caret) {
            advance();
            const std::size_t exp_begin = cur_.begin;
            const std::size_t mark = nodes_.size();
            parse_exponent();
            // Fold the exponent subtree into a constant.
            std::vector<Node> sub(nodes_.begin() + static_cast<std::ptrdiff_t>(mark), nodes_.end());
            for (auto& n : sub) {
                if (n.op == Op::Var) fail(n.begin, "exponent must be constant", {"number", "'('"});
                if (n.lhs >= 0) n.lhs -= static_cast<std::int32_t>(mark);
                if (n.rhs >= 0) n.rhs -= static_cast<std::int32_t>(mark);
            }
            const auto exp_end = static_cast<std::uint32_t>(last_end_);
            nodes_.resize(mark);
            const double exponent = fold(sub);
            if (!std::isfinite(exponent)) fail(exp_begin, "exponent is not finite", {});
            Node n;
            n.op = Op::Pow;
            n.lhs = base;
            n.value = exponent;
            n.begin = nodes_[static_cast<std::size_t>(base)].begin;
            n.end = exp_end;
            base = emit(n);
        }
        return base;
    }

    void parse_exponent() {
        if (cur_.kind == Tok::Minus) {
            const std::size_t b = cur_.begin;
            advance();
            parse_exponent();
            Node n;
            n.op = Op::Neg;
            n.lhs = static_cast<std::int32_t>(nodes_.size() - 1);
            n.begin = static_cast<std::uint32_t>(b);
            n.end = nodes_.back().end;
            emit(n);
            return;
        }
        parse_primary();
    }

    static double fold(const std::vector<Node>& sub);

    std::int32_t parse_primary() {
        const Token tok = cur_;
        switch (tok.kind) {
            case Tok::Number: {
                advance();
                Node n;
                n.op = Op::Const;
                n.value = tok.number;
                n.begin = static_cast<std::uint32_t>(tok.begin);
                n.end = static_cast<std::uint32_t>(tok.end);
                return emit(n);
            }
            case Tok::LParen: {
                advance();
                const std::int32_t inner = parse_expr();
                if (cur_.kind != Tok::RParen) fail(cur_.begin, "unbalanced parenthesis", {"')'"});
                nodes_[static_cast<std::size_t>(inner)].begin = static_cast<std::uint32_t>(tok.begin);
                nodes_[static_cast<std::size_t>(inner)].end = static_cast<std::uint32_t>(cur_.end);
                advance();
                return inner;
            }
            case Tok::Name: {
                const std::string_view name = src_.substr(tok.begin, tok.end - tok.begin);
                advance();
                if (cur_.kind == Tok::LParen) {
                    const auto it = std::find_if(kFunctions.begin(), kFunctions.end(),
                                                 [&](const FunctionName& f) { return f.name == name; });
                    if (it == kFunctions.end()) {
                        const std::string msg = "unknown function '" + std::string(name) + "' at offset " +
                                                std::to_string(tok.begin);
                        throw UnknownIdentifierError(msg + "\n" + annotate(src_, tok.begin), tok.begin,
                                                     {"function name"}, annotate(src_, tok.begin));
                    }
                    advance();
                    const std::int32_t arg = parse_expr();
                    if (cur_.kind != Tok::RParen) fail(cur_.begin, "unbalanced parenthesis", {"')'"});
                    Node n;
                    n.op = it->op;
                    n.lhs = arg;
                    n.begin = static_cast<std::uint32_t>(tok.begin);
                    n.end = static_cast<std::uint32_t>(cur_.end);
                    advance();
                    return emit(n);
                }
                Node n;
                n.begin = static_cast<std::uint32_t>(tok.begin);
                n.end = static_cast<std::uint32_t>(tok.end);
                if (name == "pi") {
                    n.op = Op::Const;
                    n.value = std::numbers::pi;
                    return emit(n);
                }
                const int slot = vars_.slot(name);
                if (slot < 0) {
                    std::string known;
                    for (std::size_t i = 0; i < vars_.size(); ++i) known += " " + std::string(vars_.name(i));
                    const std::string msg = "unknown identifier '" + std::string(name) + "' at offset " +
                                            std::to_string(tok.begin) + "; variables:" +
                                            (known.empty() ? " (none)" : known);
                    throw UnknownIdentifierError(msg + "\n" + annotate(src_, tok.begin), tok.begin,
                                                 {"variable", "pi"}, annotate(src_, tok.begin));
                }
                n.op = Op::Var;
                n.slot = static_cast<std::uint8_t>(slot);
                return emit(n);
            }
            default:
                fail(tok.begin, tok.kind == Tok::End ? "unexpected end of input" : "unexpected token",
                     {"number", "name", "'('", "'-'"});
        }
    }

    std::string_view src_;
    const VariableSet& vars_;
    std::size_t pos_ = 0;
    Token cur_;
    std::size_t last_end_ = 0;
    std::vector<Node> nodes_;
};

// Scalar kernels shared by the double and jet evaluators. Each returns
// f, f', f'' at v, or nullopt outside the domain.
struct Derivs {
    double f0, f1, f2;
};

std::optional<Derivs> unary_derivs(Op op, double v, bool need_derivative) {
    switch (op) {
        case Op::Sin: return Derivs{std::sin(v), std::cos(v), -std::sin(v)};
        case Op::Cos: return Derivs{std::cos(v), -std::sin(v), -std::cos(v)};
        case Op::Tan: {
            if (std::cos(v) == 0.0) return std::nullopt;
            const double t = std::tan(v);
            return Derivs{t, 1.0 + t * t, 2.0 * t * (1.0 + t * t)};
        }
        case Op::Exp: {
            const double e = std::exp(v);
            return Derivs{e, e, e};
        }
        case Op::Log:
            if (!(v > 0.0)) return std::nullopt;
            return Derivs{std::log(v), 1.0 / v, -1.0 / (v * v)};
        case Op::Sqrt: {
            if (need_derivative ? !(v > 0.0) : !(v >= 0.0)) return std::nullopt;
            const double s = std::sqrt(v);
            if (!need_derivative) return Derivs{s, 0.0, 0.0};
            return Derivs{s, 0.5 / s, -0.25 / (s * v)};
        }
        case Op::Sinh: return Derivs{std::sinh(v), std::cosh(v), std::sinh(v)};
        case Op::Cosh: return Derivs{std::cosh(v), std::sinh(v), std::cosh(v)};
        case Op::Atan: {
            const double w = 1.0 / (1.0 + v * v);
            return Derivs{std::atan(v), w, -2.0 * v * w * w};
        }
        case Op::Abs:
            if (need_derivative && v == 0.0) return std::nullopt;
            return Derivs{std::abs(v), v > 0.0 ? 1.0 : -1.0, 0.0};
        default: return std::nullopt;
    }
}

const char* domain_reason(Op op) {
    switch (op) {
        case Op::Tan: return "tan at a pole";
        case Op::Log: return "log of a nonpositive value";
        case Op::Sqrt: return "sqrt outside its differentiable domain";
        case Op::Abs: return "abs is not differentiable at 0";
        case Op::Div: return "division by zero";
        case Op::Pow: return "non-integer power of a nonpositive base";
        default: return "domain error";
    }
}

double integer_power(double base, long long n) {
    double result = 1.0, b = base;
    unsigned long long e = static_cast<unsigned long long>(n < 0 ? -n : n);
    while (e) {
        if (e & 1ULL) result *= b;
        b *= b;
        e >>= 1ULL;
    }
    return n < 0 ? 1.0 / result : result;
}

Jet2 integer_power(const Jet2& base, long long n) {
    Jet2 result = Jet2::constant(1.0), b = base;
    unsigned long long e = static_cast<unsigned long long>(n < 0 ? -n : n);
    bool first = true;
    while (e) {
        if (e & 1ULL) {
            result = first ? b : result * b;
            first = false;
        }
        e >>= 1ULL;
        if (e) b = b * b;
    }
    return n < 0 ? reciprocal(result) : result;
}

bool integral_exponent(double e, long long& n) {
    if (std::trunc(e) != e || std::abs(e) > 1e6) return false;
    n = static_cast<long long>(e);
    return true;
}

template <class T>
double value_of(const T& x) {
    if constexpr (std::is_same_v<T, double>) return x; else return x.v;
}

template <class T>
T apply_chain(const T& x, const Derivs& dv) {
    if constexpr (std::is_same_v<T, double>) return dv.f0; else return x.chain(dv.f0, dv.f1, dv.f2);
}

template <class T>
T constant_of(double c) {
    if constexpr (std::is_same_v<T, double>) return c; else return T::constant(c);
}

std::string subexpr_text(const std::string& src, const Node& n) {
    return src.substr(n.begin, n.end - n.begin);
}

template <class T, class VarFn>
T evaluate_nodes(const std::vector<Node>& nodes, const std::string& src, VarFn&& var, const std::array<double, 3>& where) {
    constexpr bool is_jet = !std::is_same_v<T, double>;
    constexpr std::size_t kStack = 64;
    std::array<T, kStack> stack_buf;
    std::vector<T> heap_buf;
    T* vals = stack_buf.data();
    if (nodes.size() > kStack) {
        heap_buf.resize(nodes.size());
        vals = heap_buf.data();
    }
    auto domain = [&](const Node& n) -> DomainError {
        char buf[128];
        std::snprintf(buf, sizeof buf, " at (%.17g, %.17g, %.17g)", where[0], where[1], where[2]);
        return DomainError(std::string(domain_reason(n.op)) + " in '" + subexpr_text(src, n) + "'" + buf,
                           subexpr_text(src, n), where);
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        const T* a = n.lhs >= 0 ? &vals[n.lhs] : nullptr;
        const T* b = n.rhs >= 0 ? &vals[n.rhs] : nullptr;
        switch (n.op) {
            case Op::Const: vals[i] = constant_of<T>(n.value); break;
            case Op::Var: vals[i] = var(n.slot); break;
            case Op::Add: vals[i] = *a + *b; break;
            case Op::Sub: vals[i] = *a - *b; break;
            case Op::Mul: vals[i] = *a * *b; break;
            case Op::Div:
                if (value_of(*b) == 0.0) throw domain(n);
                vals[i] = *a / *b;
                break;
            case Op::Neg: vals[i] = -*a; break;
            case Op::Pow: {
                long long k = 0;
                if (integral_exponent(n.value, k)) {
                    if (k < 0 && value_of(*a) == 0.0) throw domain(n);
                    vals[i] = integer_power(*a, k);
                } else {
                    const double base = value_of(*a);
                    if (!(base > 0.0)) throw domain(n);
                    const double e = n.value;
                    const double f0 = std::pow(base, e);
                    vals[i] = apply_chain(*a, Derivs{f0, e * f0 / base, e * (e - 1.0) * f0 / (base * base)});
                }
                break;
            }
            default: {
                const auto dv = unary_derivs(n.op, value_of(*a), is_jet);
                if (!dv) throw domain(n);
                vals[i] = apply_chain(*a, *dv);
            }
        }
    }
    return vals[nodes.size() - 1];
}

double Parser::fold(const std::vector<Node>& sub) {
    static const std::string empty;
    return evaluate_nodes<double>(sub, empty, [](std::size_t) { return 0.0; }, {0.0, 0.0, 0.0});
}

void print_node(const std::vector<Node>& nodes, std::int32_t idx, const VariableSet& vars, std::string& out) {
    const Node& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.op) {
        case Op::Const: out += format_number(n.value); return;
        case Op::Var: out += vars.name(n.slot); return;
        case Op::Neg:
            out += "(-";
            print_node(nodes, n.lhs, vars, out);
            out += ')';
            return;
        case Op::Pow:
            out += '(';
            print_node(nodes, n.lhs, vars, out);
            out += "^(" + format_number(n.value) + "))";
            return;
        case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: {
            const char sym = n.op == Op::Add ? '+' : n.op == Op::Sub ? '-' : n.op == Op::Mul ? '*' : '/';
            out += '(';
            print_node(nodes, n.lhs, vars, out);
            out += ' ';
            out += sym;
            out += ' ';
            print_node(nodes, n.rhs, vars, out);
            out += ')';
            return;
        }
        default:
            out += function_name(n.op);
            out += '(';
            print_node(nodes, n.lhs, vars, out);
            out += ')';
    }
}

}  // namespace

Expr parse(std::string_view source, const VariableSet& vars) {
    Parser p(source, vars);
    Expr e;
    e.nodes_ = std::make_shared<const std::vector<Node>>(p.run());
    e.source_ = std::make_shared<const std::string>(source);
    e.vars_ = &vars;
    return e;
}

double parse_constant(std::string_view source) {
    return parse(source, VariableSet::none()).evaluate(std::span<const double>{});
}

std::string Expr::print() const {
    std::string out;
    print_node(*nodes_, static_cast<std::int32_t>(nodes_->size() - 1), *vars_, out);
    return out;
}

std::size_t Expr::depth() const {
    std::vector<std::size_t> d(nodes_->size(), 0);
    for (std::size_t i = 0; i < nodes_->size(); ++i) {
        const Node& n = (*nodes_)[i];
        std::size_t m = 0;
        bool internal = false;
        if (n.lhs >= 0) { m = std::max(m, d[static_cast<std::size_t>(n.lhs)]); internal = true; }
        if (n.rhs >= 0) { m = std::max(m, d[static_cast<std::size_t>(n.rhs)]); internal = true; }
        d[i] = internal ? m + 1 : 0;
    }
    return d.back();
}

bool Expr::uses_slot(std::size_t slot) const noexcept {
    return std::any_of(nodes_->begin(), nodes_->end(),
                       [&](const Node& n) { return n.op == Op::Var && n.slot == slot; });
}

bool Expr::is_constant() const noexcept {
    return std::none_of(nodes_->begin(), nodes_->end(), [](const Node& n) { return n.op == Op::Var; });
}

double Expr::evaluate(std::span<const double> values) const {
    std::array<double, 3> where{};
    for (std::size_t i = 0; i < std::min<std::size_t>(3, values.size()); ++i) where[i] = values[i];
    return evaluate_nodes<double>(*nodes_, *source_, [&](std::size_t s) { return values[s]; }, where);
}

Jet2 Expr::eval_jet(const std::array<double, 3>& p) const {
    return evaluate_nodes<Jet2>(*nodes_, *source_, [&](std::size_t s) { return Jet2::variable(p[s], s); }, p);
}

CurveJet eval_curve_jet(const std::array<Expr, 3>& components, double t) {
    CurveJet out;
    for (std::size_t i = 0; i < 3; ++i) {
        const Jet2 j = components[i].eval_jet({t, 0.0, 0.0});
        out.pos[i] = j.v;
        out.vel[i] = j.d[0];
        out.acc[i] = j.h[0];
    }
    return out;
}

}  // namespace heis
