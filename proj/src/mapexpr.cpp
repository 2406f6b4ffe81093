#include "brancov/mapexpr.hpp"

#include <cctype>
#include <cmath>

namespace brancov {

namespace {

// Rational function value: num/den as coefficient vectors.
struct Value {
    Poly num;
    Poly den;
};

Value make_const(Complex c) { return Value{{c}, {Complex(1.0)}}; }

Value add(const Value& a, const Value& b) {
    return Value{poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                 poly_mul(a.den, b.den)};
}

Value sub(const Value& a, const Value& b) {
    return Value{poly_sub(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                 poly_mul(a.den, b.den)};
}

Value mul(const Value& a, const Value& b) {
    return Value{poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}

Value div(const Value& a, const Value& b, std::size_t pos) {
    if (poly_degree(poly_trim(b.num)) < 0)
        throw ParseError("division by zero", pos);
    return Value{poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
}

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    bool consume(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    Value parse_expr() {
        Value v = parse_term();
        for (;;) {
            if (consume('+'))
                v = add(v, parse_term());
            else if (consume('-'))
                v = sub(v, parse_term());
            else
                return v;
        }
    }

    Value parse_term() {
        Value v = parse_unary();
        for (;;) {
            if (consume('*')) {
                v = mul(v, parse_unary());
            } else if (consume('/')) {
                std::size_t at = pos;
                v = div(v, parse_unary(), at);
            } else {
                // Implicit multiplication: "2z", "2(z-1)", "z(z+1)".
                skip_ws();
                if (pos < text.size() && (text[pos] == 'z' || text[pos] == '(' ||
                                          text[pos] == 'i' ||
                                          std::isdigit(static_cast<unsigned char>(text[pos]))))
                    v = mul(v, parse_unary());
                else
                    return v;
            }
        }
    }

    Value parse_unary() {
        if (consume('-')) return sub(make_const(Complex(0.0)), parse_unary());
        if (consume('+')) return parse_unary();
        return parse_power();
    }

    Value parse_power() {
        Value base = parse_atom();
        if (!consume('^')) return base;
        skip_ws();
        bool negative = consume('-');
        std::size_t at = pos;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw ParseError("expected integer exponent", pos);
        long n = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            n = n * 10 + (text[pos] - '0');
            if (n > 64) throw ParseError("exponent too large", at);
            ++pos;
        }
        Value acc = make_const(Complex(1.0));
        for (long k = 0; k < n; ++k) acc = mul(acc, base);
        if (negative) acc = div(make_const(Complex(1.0)), acc, at);
        return acc;
    }

    Value parse_atom() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of expression", pos);
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Value v = parse_expr();
            if (!consume(')')) throw ParseError("expected ')'", pos);
            return v;
        }
        if (c == 'z') {
            ++pos;
            return Value{{Complex(0.0), Complex(1.0)}, {Complex(1.0)}};
        }
        if (c == 'i') {
            ++pos;
            return make_const(Complex(0.0, 1.0));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    Value parse_number() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos++;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                    ++pos;
            } else {
                pos = mark; // not an exponent
            }
        }
        double value = 0.0;
        try {
            value = std::stod(text.substr(start, pos - start));
        } catch (const std::exception&) {
            throw ParseError("bad numeric literal", start);
        }
        if (pos < text.size() && text[pos] == 'i') {
            ++pos;
            return make_const(Complex(0.0, value));
        }
        return make_const(Complex(value));
    }
};

} // namespace

RationalMap parse_map(const std::string& text) {
    Parser p{text};
    Value v = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw ParseError("trailing input", p.pos);
    try {
        return make_rational_map(std::move(v.num), std::move(v.den));
    } catch (const Error& e) {
        throw ParseError(e.what(), 0);
    }
}

} // namespace brancov
