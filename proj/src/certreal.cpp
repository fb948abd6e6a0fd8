#include "seqsum/certreal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>
#include <vector>

namespace seqsum {

namespace {

mpfr_prec_t clamp_prec(mpfr_prec_t bits) {
    return std::max<mpfr_prec_t>(bits, 8);
}

mpz_class mpq_floor(const mpq_class& v) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return r;
}

mpz_class mpq_ceil(const mpq_class& v) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return r;
}

mpz_class pow10_z(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace

CertifiedReal::CertifiedReal(mpfr_prec_t bits) : prec_(clamp_prec(bits)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

CertifiedReal::CertifiedReal(const CertifiedReal& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDN);  // same precision: exact
    mpfr_set(hi_, o.hi_, MPFR_RNDN);
}

CertifiedReal::CertifiedReal(CertifiedReal&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

CertifiedReal& CertifiedReal::operator=(const CertifiedReal& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, o.prec_);
        mpfr_set_prec(hi_, o.prec_);
        prec_ = o.prec_;
        mpfr_set(lo_, o.lo_, MPFR_RNDN);
        mpfr_set(hi_, o.hi_, MPFR_RNDN);
    }
    return *this;
}

CertifiedReal& CertifiedReal::operator=(CertifiedReal&& o) noexcept {
    if (this != &o) {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
        std::swap(prec_, o.prec_);
    }
    return *this;
}

CertifiedReal::~CertifiedReal() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

CertifiedReal CertifiedReal::from_integer(const mpz_class& z, mpfr_prec_t bits) {
    CertifiedReal r(bits);
    mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::from_rational(const mpq_class& q, mpfr_prec_t bits) {
    CertifiedReal r(bits);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::from_endpoints(const mpq_class& lo, const mpq_class& hi,
                                            mpfr_prec_t bits) {
    if (lo > hi) throw std::invalid_argument("from_endpoints: lo > hi");
    CertifiedReal r(bits);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::from_surd(const QuadraticSurd& s, mpfr_prec_t bits) {
    CertifiedReal root = from_integer(s.d(), bits).sqrt();
    CertifiedReal num = from_integer(s.a(), bits) + from_integer(s.b(), bits) * root;
    return num / from_integer(s.c(), bits);
}

mpq_class CertifiedReal::lo_q() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), lo_);
    return q;
}

mpq_class CertifiedReal::hi_q() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), hi_);
    return q;
}

CertifiedReal CertifiedReal::operator-() const {
    CertifiedReal r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

CertifiedReal operator+(const CertifiedReal& x, const CertifiedReal& y) {
    CertifiedReal r(std::max(x.prec_, y.prec_));
    mpfr_add(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
    return r;
}

CertifiedReal operator-(const CertifiedReal& x, const CertifiedReal& y) {
    CertifiedReal r(std::max(x.prec_, y.prec_));
    mpfr_sub(r.lo_, x.lo_, y.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, x.hi_, y.lo_, MPFR_RNDU);
    return r;
}

CertifiedReal operator*(const CertifiedReal& x, const CertifiedReal& y) {
    CertifiedReal r(std::max(x.prec_, y.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    const mpfr_srcptr xs[2] = {x.lo_, x.hi_};
    const mpfr_srcptr ys[2] = {y.lo_, y.hi_};
    bool first = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_mul(t, xs[i], ys[j], MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, xs[i], ys[j], MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

CertifiedReal operator/(const CertifiedReal& x, const CertifiedReal& y) {
    if (!(mpfr_sgn(y.lo_) > 0 || mpfr_sgn(y.hi_) < 0))
        throw DomainError("division by interval containing zero");
    CertifiedReal r(std::max(x.prec_, y.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    const mpfr_srcptr xs[2] = {x.lo_, x.hi_};
    const mpfr_srcptr ys[2] = {y.lo_, y.hi_};
    bool first = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_div(t, xs[i], ys[j], MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_div(t, xs[i], ys[j], MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

CertifiedReal CertifiedReal::abs() const {
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    CertifiedReal r(prec_);
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    if (mpfr_cmp(hi_, r.hi_) > 0) mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::pow_int(long e) const {
    if (e == 0) return from_integer(1, prec_);
    if (e < 0) return from_integer(1, prec_) / pow_int(-e);
    CertifiedReal result = from_integer(1, prec_);
    CertifiedReal base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k > 0) {
        if (k & 1) result = result * base;
        if (k >>= 1) base = base * base;
    }
    return result;
}

CertifiedReal CertifiedReal::log() const {
    if (mpfr_sgn(lo_) <= 0) throw DomainError("log of interval not provably positive");
    CertifiedReal r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw DomainError("sqrt of interval not provably non-negative");
    CertifiedReal r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

bool CertifiedReal::provably_positive() const { return mpfr_sgn(lo_) > 0; }
bool CertifiedReal::provably_nonpositive() const { return mpfr_sgn(hi_) <= 0; }
bool CertifiedReal::provably_negative() const { return mpfr_sgn(hi_) < 0; }
bool CertifiedReal::provably_lt(const CertifiedReal& o) const {
    return mpfr_cmp(hi_, o.lo_) < 0;
}
bool CertifiedReal::provably_le(const CertifiedReal& o) const {
    return mpfr_cmp(hi_, o.lo_) <= 0;
}
bool CertifiedReal::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}
bool CertifiedReal::is_exact_zero() const {
    return mpfr_zero_p(lo_) && mpfr_zero_p(hi_);
}

std::string CertifiedReal::str(size_t significant_digits) const {
    return decimal_string(mid(), significant_digits) + " +/- " + decimal_upper_bound(rad());
}

mpz_class certified_floor(const CertifiedReal& x) {
    mpz_class flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), x.lo_, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), x.hi_, MPFR_RNDD);
    if (flo != fhi)
        throw AmbiguousAtPrecision("floor straddles an integer at " +
                                   std::to_string(x.precision_bits()) + " bits");
    return flo;
}

CertifiedReal nearest_integer_distance(const CertifiedReal& x) {
    // Image of the interval under ||.||, computed exactly on the dyadic
    // endpoints: min is 0 iff an integer lies inside, max is 1/2 iff a
    // half-integer does; otherwise the extrema sit at the endpoints.
    mpq_class l = x.lo_q(), h = x.hi_q();
    const mpq_class half(1, 2);
    if (h - l >= 1) return CertifiedReal::from_endpoints(0, half, x.precision_bits());

    auto dist = [](const mpq_class& t) {
        mpq_class frac = t - mpq_class(mpq_floor(t));
        return std::min(frac, mpq_class(1 - frac));
    };

    bool has_integer = mpq_floor(h) >= mpq_ceil(l);
    mpz_class a2 = mpq_ceil(mpq_class(2 * l)), b2 = mpq_floor(mpq_class(2 * h));
    bool has_half = b2 >= a2 && (mpz_odd_p(a2.get_mpz_t()) ||
                                 mpz_odd_p(b2.get_mpz_t()) || b2 > a2);

    mpq_class dl = dist(l), dh = dist(h);
    mpq_class lo = has_integer ? mpq_class(0) : std::min(dl, dh);
    mpq_class hi = has_half ? half : std::max(dl, dh);
    return CertifiedReal::from_endpoints(lo, hi, x.precision_bits());
}

// ---------------------------------------------------------------------------
// Expression trees

struct RealExpr::Node {
    enum class Kind { Integer, Rational, Surd, Phi, Log, Neg, Add, Sub, Mul, Div, Pow };
    Kind kind;
    mpz_class ivalue;
    mpq_class qvalue;
    QuadraticSurd svalue;
    long exponent = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = RealExpr::Node;

std::shared_ptr<const Node> make_node(Node&& n) {
    return std::make_shared<const Node>(std::move(n));
}

}  // namespace

RealExpr RealExpr::integer(mpz_class v) {
    Node n;
    n.kind = Node::Kind::Integer;
    n.ivalue = std::move(v);
    return RealExpr(make_node(std::move(n)));
}

RealExpr RealExpr::rational(mpq_class v) {
    v.canonicalize();
    if (v.get_den() == 1) return integer(v.get_num());
    Node n;
    n.kind = Node::Kind::Rational;
    n.qvalue = std::move(v);
    return RealExpr(make_node(std::move(n)));
}

RealExpr RealExpr::surd(QuadraticSurd v) {
    Node n;
    n.kind = Node::Kind::Surd;
    n.svalue = std::move(v);
    return RealExpr(make_node(std::move(n)));
}

RealExpr RealExpr::phi() {
    Node n;
    n.kind = Node::Kind::Phi;
    return RealExpr(make_node(std::move(n)));
}

RealExpr RealExpr::log(RealExpr e) {
    Node n;
    n.kind = Node::Kind::Log;
    n.lhs = std::move(e.node_);
    return RealExpr(make_node(std::move(n)));
}

RealExpr RealExpr::pow(long exponent) const {
    Node n;
    n.kind = Node::Kind::Pow;
    n.lhs = node_;
    n.exponent = exponent;
    return RealExpr(make_node(std::move(n)));
}

RealExpr RealExpr::operator-() const {
    Node n;
    n.kind = Node::Kind::Neg;
    n.lhs = node_;
    return RealExpr(make_node(std::move(n)));
}

RealExpr operator+(const RealExpr& x, const RealExpr& y) {
    Node n;
    n.kind = Node::Kind::Add;
    n.lhs = x.node_;
    n.rhs = y.node_;
    return RealExpr(make_node(std::move(n)));
}

RealExpr operator-(const RealExpr& x, const RealExpr& y) {
    Node n;
    n.kind = Node::Kind::Sub;
    n.lhs = x.node_;
    n.rhs = y.node_;
    return RealExpr(make_node(std::move(n)));
}

RealExpr operator*(const RealExpr& x, const RealExpr& y) {
    Node n;
    n.kind = Node::Kind::Mul;
    n.lhs = x.node_;
    n.rhs = y.node_;
    return RealExpr(make_node(std::move(n)));
}

RealExpr operator/(const RealExpr& x, const RealExpr& y) {
    Node n;
    n.kind = Node::Kind::Div;
    n.lhs = x.node_;
    n.rhs = y.node_;
    return RealExpr(make_node(std::move(n)));
}

CertifiedReal RealExpr::eval(mpfr_prec_t bits) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Node::Kind::Integer:
            return CertifiedReal::from_integer(n.ivalue, bits);
        case Node::Kind::Rational:
            return CertifiedReal::from_rational(n.qvalue, bits);
        case Node::Kind::Surd:
            return CertifiedReal::from_surd(n.svalue, bits);
        case Node::Kind::Phi:
            return CertifiedReal::from_surd(QuadraticSurd::golden_ratio(), bits);
        case Node::Kind::Log:
            return RealExpr(n.lhs).eval(bits).log();
        case Node::Kind::Neg:
            return -RealExpr(n.lhs).eval(bits);
        case Node::Kind::Add:
            return RealExpr(n.lhs).eval(bits) + RealExpr(n.rhs).eval(bits);
        case Node::Kind::Sub:
            return RealExpr(n.lhs).eval(bits) - RealExpr(n.rhs).eval(bits);
        case Node::Kind::Mul:
            return RealExpr(n.lhs).eval(bits) * RealExpr(n.rhs).eval(bits);
        case Node::Kind::Div:
            return RealExpr(n.lhs).eval(bits) / RealExpr(n.rhs).eval(bits);
        case Node::Kind::Pow:
            return RealExpr(n.lhs).eval(bits).pow_int(n.exponent);
    }
    throw std::logic_error("RealExpr: unknown node kind");
}

std::optional<mpq_class> RealExpr::exact_rational() const {
    const Node& n = *node_;
    auto sub = [](const std::shared_ptr<const Node>& p) {
        return RealExpr(p).exact_rational();
    };
    switch (n.kind) {
        case Node::Kind::Integer:
            return mpq_class(n.ivalue);
        case Node::Kind::Rational:
            return n.qvalue;
        case Node::Kind::Surd:
            if (n.svalue.is_rational()) return n.svalue.to_rational();
            return std::nullopt;
        case Node::Kind::Phi:
        case Node::Kind::Log:
            return std::nullopt;
        case Node::Kind::Neg: {
            auto v = sub(n.lhs);
            if (!v) return std::nullopt;
            return mpq_class(-*v);
        }
        case Node::Kind::Pow: {
            auto v = sub(n.lhs);
            if (!v) return std::nullopt;
            if (*v == 0 && n.exponent < 0) return std::nullopt;
            mpq_class base = n.exponent < 0 ? mpq_class(1) / *v : *v;
            unsigned long e = static_cast<unsigned long>(
                n.exponent < 0 ? -n.exponent : n.exponent);
            mpq_class out(1);
            for (unsigned long i = 0; i < e; ++i) out *= base;
            return out;
        }
        case Node::Kind::Add:
        case Node::Kind::Sub:
        case Node::Kind::Mul:
        case Node::Kind::Div: {
            auto a = sub(n.lhs), b = sub(n.rhs);
            if (!a || !b) return std::nullopt;
            switch (n.kind) {
                case Node::Kind::Add: return mpq_class(*a + *b);
                case Node::Kind::Sub: return mpq_class(*a - *b);
                case Node::Kind::Mul: return mpq_class(*a * *b);
                default:
                    if (*b == 0) return std::nullopt;
                    return mpq_class(*a / *b);
            }
        }
    }
    return std::nullopt;
}

std::string RealExpr::str() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Node::Kind::Integer:
            return n.ivalue.get_str();
        case Node::Kind::Rational:
            return n.qvalue.get_num().get_str() + "/" + n.qvalue.get_den().get_str();
        case Node::Kind::Surd: {
            const QuadraticSurd& s = n.svalue;
            if (s.is_rational()) {
                mpq_class r = s.to_rational();
                if (r.get_den() == 1) return r.get_num().get_str();
                return "(" + r.get_num().get_str() + "/" + r.get_den().get_str() + ")";
            }
            std::string body = "(" + s.a().get_str() + "+" + s.b().get_str() +
                               "*sqrt(" + s.d().get_str() + "))";
            if (s.c() != 1) return "(" + body + "/" + s.c().get_str() + ")";
            return body;
        }
        case Node::Kind::Phi:
            return "phi";
        case Node::Kind::Log:
            return "log(" + RealExpr(n.lhs).str() + ")";
        case Node::Kind::Neg:
            return "(-" + RealExpr(n.lhs).str() + ")";
        case Node::Kind::Add:
            return "(" + RealExpr(n.lhs).str() + "+" + RealExpr(n.rhs).str() + ")";
        case Node::Kind::Sub:
            return "(" + RealExpr(n.lhs).str() + "-" + RealExpr(n.rhs).str() + ")";
        case Node::Kind::Mul:
            return "(" + RealExpr(n.lhs).str() + "*" + RealExpr(n.rhs).str() + ")";
        case Node::Kind::Div:
            return "(" + RealExpr(n.lhs).str() + "/" + RealExpr(n.rhs).str() + ")";
        case Node::Kind::Pow: {
            std::string e = std::to_string(n.exponent);
            if (n.exponent < 0) e = "(" + e + ")";
            return RealExpr(n.lhs).str() + "^" + e;
        }
    }
    throw std::logic_error("RealExpr: unknown node kind");
}

// ---------------------------------------------------------------------------
// Parser for the CLI mini-language (LL(1), whitespace insignificant)

namespace {

struct Token {
    enum class Type { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type;
    std::string text;
    mpq_class value;  // for Number
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            std::string ipart = text.substr(i, j - i);
            std::string fpart;
            if (j < text.size() && text[j] == '.') {
                size_t k = j + 1;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                if (k == j + 1) throw ParseError("malformed number", text.substr(i, k - i));
                fpart = text.substr(j + 1, k - j - 1);
                j = k;
            }
            mpq_class v{mpz_class(ipart)};
            if (!fpart.empty()) {
                v += mpq_class(mpz_class(fpart), pow10_z(fpart.size()));
                v.canonicalize();
            }
            out.push_back(Token{Token::Type::Number, text.substr(i, j - i), v});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back(Token{Token::Type::Name, text.substr(i, j - i), 0});
            i = j;
            continue;
        }
        Token::Type t;
        switch (c) {
            case '+': t = Token::Type::Plus; break;
            case '-': t = Token::Type::Minus; break;
            case '*': t = Token::Type::Star; break;
            case '/': t = Token::Type::Slash; break;
            case '^': t = Token::Type::Caret; break;
            case '(': t = Token::Type::LParen; break;
            case ')': t = Token::Type::RParen; break;
            default:
                throw ParseError("unexpected character", std::string(1, c));
        }
        out.push_back(Token{t, std::string(1, c), 0});
        ++i;
    }
    out.push_back(Token{Token::Type::End, "<end>", 0});
    return out;
}

class ExprParser {
public:
    explicit ExprParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    RealExpr parse() {
        RealExpr e = expr();
        expect(Token::Type::End);
        return e;
    }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool accept(Token::Type t) {
        if (peek().type == t) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Token::Type t) {
        if (!accept(t)) throw ParseError("unexpected token", peek().text);
    }

    RealExpr expr() {
        RealExpr e = term();
        for (;;) {
            if (accept(Token::Type::Plus))
                e = e + term();
            else if (accept(Token::Type::Minus))
                e = e - term();
            else
                return e;
        }
    }

    RealExpr term() {
        RealExpr e = unary();
        for (;;) {
            if (accept(Token::Type::Star))
                e = e * unary();
            else if (accept(Token::Type::Slash))
                e = e / unary();
            else
                return e;
        }
    }

    RealExpr unary() {
        if (accept(Token::Type::Minus)) return -unary();
        return power();
    }

    RealExpr power() {
        RealExpr base = atom();
        if (accept(Token::Type::Caret)) return base.pow(exponent());
        return base;
    }

    long exponent() {
        bool paren = accept(Token::Type::LParen);
        bool neg = accept(Token::Type::Minus);
        if (peek().type != Token::Type::Number || peek().value.get_den() != 1)
            throw ParseError("integer exponent expected", peek().text);
        mpz_class v = advance().value.get_num();
        if (!v.fits_slong_p()) throw ParseError("exponent out of range", v.get_str());
        if (paren) expect(Token::Type::RParen);
        long e = v.get_si();
        return neg ? -e : e;
    }

    RealExpr atom() {
        const Token& t = peek();
        switch (t.type) {
            case Token::Type::Number: {
                mpq_class v = advance().value;
                return RealExpr::rational(v);
            }
            case Token::Type::Name: {
                std::string name = advance().text;
                if (name == "phi") return RealExpr::phi();
                if (name == "sqrt") {
                    expect(Token::Type::LParen);
                    if (peek().type != Token::Type::Number || peek().value.get_den() != 1)
                        throw ParseError("sqrt expects an integer literal", peek().text);
                    mpz_class d = advance().value.get_num();
                    expect(Token::Type::RParen);
                    return RealExpr::surd(QuadraticSurd::sqrt_of(d));
                }
                if (name == "log") {
                    expect(Token::Type::LParen);
                    RealExpr e = expr();
                    expect(Token::Type::RParen);
                    return RealExpr::log(e);
                }
                throw ParseError("unknown name", name);
            }
            case Token::Type::LParen: {
                advance();
                RealExpr e = expr();
                expect(Token::Type::RParen);
                return e;
            }
            default:
                throw ParseError("unexpected token", t.text);
        }
    }
};

}  // namespace

RealExpr RealExpr::parse(const std::string& text) {
    return ExprParser(tokenize(text)).parse();
}

// ---------------------------------------------------------------------------
// Decimal rendering

std::string decimal_string(const mpq_class& value, size_t significant_digits) {
    size_t sig = std::max<size_t>(significant_digits, 1);
    if (value == 0) return "0";
    bool neg = value < 0;
    mpz_class n = abs(mpz_class(value.get_num()));
    mpz_class d = value.get_den();

    long bn = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
    long bd = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
    long e10 = static_cast<long>(std::floor(static_cast<double>(bn - bd) * 0.30103));

    std::string digits;
    for (int iter = 0; iter < 8; ++iter) {
        long t = static_cast<long>(sig) - 1 - e10;
        mpz_class scaled;
        if (t >= 0)
            scaled = n * pow10_z(static_cast<unsigned long>(t)) / d;
        else
            scaled = n / (d * pow10_z(static_cast<unsigned long>(-t)));
        if (scaled == 0) {
            e10 -= static_cast<long>(sig);
            continue;
        }
        digits = scaled.get_str();
        if (digits.size() == sig) break;
        e10 += static_cast<long>(digits.size()) - static_cast<long>(sig);
        digits.clear();
    }
    if (digits.empty()) throw std::logic_error("decimal_string: failed to normalize");

    std::string out = neg ? "-" : "";
    out += digits.substr(0, 1);
    if (sig > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(e10);
    return out;
}

std::string decimal_upper_bound(const mpq_class& value) {
    mpq_class v = ::abs(value);
    if (v == 0) return "0";
    mpz_class n = v.get_num(), d = v.get_den();

    long bn = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
    long bd = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
    long e10 = static_cast<long>(std::floor(static_cast<double>(bn - bd) * 0.30103));
    const long sig = 3;

    for (int iter = 0; iter < 8; ++iter) {
        long t = sig - 1 - e10;
        mpz_class scaled;
        if (t >= 0)
            mpz_cdiv_q(scaled.get_mpz_t(),
                       mpz_class(n * pow10_z(static_cast<unsigned long>(t))).get_mpz_t(),
                       d.get_mpz_t());
        else
            mpz_cdiv_q(scaled.get_mpz_t(), n.get_mpz_t(),
                       mpz_class(d * pow10_z(static_cast<unsigned long>(-t))).get_mpz_t());
        if (scaled == 0) {
            e10 -= sig;
            continue;
        }
        std::string digits = scaled.get_str();
        if (static_cast<long>(digits.size()) == sig)
            return digits.substr(0, 1) + "." + digits.substr(1) + "e" + std::to_string(e10);
        e10 += static_cast<long>(digits.size()) - sig;
    }
    throw std::logic_error("decimal_upper_bound: failed to normalize");
}

}  // namespace seqsum
