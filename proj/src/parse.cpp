#include <cctype>

#include "lie/expr.hpp"

namespace lie {

namespace {

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& vars, const std::vector<std::string>& params)
        : s_(s), vars_(vars), params_(params) {}

    Expression run() {
        Expression e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("syntax error at offset " + std::to_string(pos_) + ": " + what, pos_);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expression expr() {
        std::vector<Expression> terms;
        bool neg = accept('-');
        Expression t = term();
        terms.push_back(neg ? -t : t);
        for (;;) {
            if (accept('+'))
                terms.push_back(term());
            else if (accept('-'))
                terms.push_back(-term());
            else
                break;
        }
        return Expression::sum(terms);
    }

    Expression term() {
        std::vector<Expression> fs{factor()};
        for (;;) {
            if (accept('*'))
                fs.push_back(factor());
            else if (accept('/'))
                fs.push_back(Expression::pow(factor(), -1));
            else
                break;
        }
        return Expression::product(fs);
    }

    Expression factor() {
        Expression a = atom();
        if (accept('^')) {
            skip();
            bool neg = false;
            if (pos_ < s_.size() && s_[pos_] == '-') {
                neg = true;
                ++pos_;
            }
            skip();
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer exponent");
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ - start > 6) fail("exponent too large");
            int k = std::stoi(s_.substr(start, pos_ - start));
            a = Expression::pow(a, neg ? -k : k);
        }
        return a;
    }

    Integer integer_literal() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return Integer(s_.substr(start, pos_ - start));
    }

    Expression atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = integer_literal();
            Integer den = 1;
            std::size_t save = pos_;
            if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
                ++pos_;
                den = integer_literal();
                if (den == 0) {
                    pos_ = save + 1;
                    fail("zero denominator");
                }
            }
            Rational q(num, den);
            q.canonicalize();
            return Expression(q);
        }
        if (c == '(') {
            ++pos_;
            Expression e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                        s_[pos_] == '\''))
                ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            for (std::uint32_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == id) return Expression::var(i);
            for (std::uint32_t i = 0; i < params_.size(); ++i)
                if (params_[i] == id) return Expression::param(i);
            static const std::pair<const char*, FnKind> fns[] = {
                {"log", FnKind::Log}, {"exp", FnKind::Exp}, {"atan", FnKind::Atan}, {"sqrt", FnKind::Sqrt}};
            for (auto& [name, kind] : fns)
                if (id == name) {
                    if (!accept('(')) fail("expected '(' after function name");
                    Expression arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    return Expression::fn(kind, arg);
                }
            std::size_t at = start;
            throw ParseError("unknown identifier '" + id + "' at offset " + std::to_string(at), at);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    const std::vector<std::string>& params_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(const std::string& text, const std::vector<std::string>& vars,
                            const std::vector<std::string>& params) {
    return Parser(text, vars, params).run();
}

}  // namespace lie
