#include "agr/expr.hpp"

#include <cctype>

namespace agr {

namespace {

class Parser {
public:
    Parser(const std::string& text, const ExprEnv& env) : text_(text), env_(env) {}

    Element parse() {
        Element e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ExprError(pos_, "unexpected trailing input");
        return e;
    }

private:
    const std::string& text_;
    const ExprEnv& env_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Element expr() {
        Element e = term();
        while (eat('*')) e = mul(e, term());
        return e;
    }

    Element term() {
        Element e = factor();
        if (eat('^')) return power(e, integer());
        return e;
    }

    Element factor() {
        if (eat('(')) {
            Element e = expr();
            if (!eat(')')) throw ExprError(pos_, "expected ')'");
            return e;
        }
        skip_ws();
        size_t at = pos_;
        std::string name = identifier();
        if (name == "comm" || name == "conj") {
            if (!eat('(')) throw ExprError(pos_, "expected '(' after '" + name + "'");
            Element a = expr();
            if (!eat(',')) throw ExprError(pos_, "expected ','");
            Element b = expr();
            if (!eat(')')) throw ExprError(pos_, "expected ')'");
            return name == "comm" ? commutator(a, b) : conjugate(a, b);
        }
        auto it = env_.find(name);
        if (it == env_.end()) throw ExprError(at, "unknown name '" + name + "'");
        return it->second;
    }

    std::string identifier() {
        skip_ws();
        size_t begin = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == begin) throw ExprError(begin, "expected a name");
        return text_.substr(begin, pos_ - begin);
    }

    long long integer() {
        skip_ws();
        size_t begin = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) throw ExprError(begin, "expected an integer");
        try {
            return std::stoll(text_.substr(begin, pos_ - begin));
        } catch (const std::exception&) {
            throw ExprError(begin, "integer out of range");
        }
    }
};

}  // namespace

Element parse_expression(const std::string& text, const ExprEnv& env) {
    return Parser(text, env).parse();
}

}  // namespace agr
