#pragma once

// Text form of SuperElems.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := primary ('^' signed-int)?
//   primary:= integer | ident | '(' expr ')'
//
// Identifiers resolve first against the VarTable, then against caller-supplied parameters
// (e.g. l -> 1). A divisor must pass invert_unit. Whitespace is insignificant.
//
// format() writes terms in key order as  coeff*z^e*...*t_i*t_j  with odd factors ascending, which
// parse() reads back to the identical canonical element.

#include <cctype>
#include <map>
#include <string>
#include <string_view>

#include "superalg.hpp"

namespace supergeo {

using ParamMap = std::map<std::string, Rational, std::less<>>;

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, const TablePtr& table, const ParamMap& params)
        : text_(text), table_(table), params_(params)
    {
    }

    SuperElem parse_all()
    {
        SuperElem r = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    SuperElem expr()
    {
        bool negate = false;
        if (accept('-')) {
            negate = true;
        } else {
            accept('+');
        }
        SuperElem r = term();
        if (negate) r = -r;
        for (;;) {
            if (accept('+')) {
                r += term();
            } else if (accept('-')) {
                r -= term();
            } else {
                return r;
            }
        }
    }

    SuperElem term()
    {
        SuperElem r = factor();
        for (;;) {
            if (accept('*')) {
                r = r * factor();
            } else if (accept('/')) {
                skip_ws();
                const std::size_t at = pos_;
                SuperElem d = factor();
                try {
                    r = r * invert_unit(d);
                } catch (const not_a_unit& e) {
                    throw parse_error(std::string("division by non-unit (") + e.what() + ")", at);
                }
            } else {
                return r;
            }
        }
    }

    SuperElem factor()
    {
        skip_ws();
        const std::size_t at = pos_;
        SuperElem base = primary();
        if (!accept('^')) return base;
        skip_ws();
        bool negative = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            negative = text_[pos_] == '-';
            ++pos_;
        }
        const std::string digits = read_digits();
        if (digits.empty()) fail("expected integer exponent");
        if (digits.size() > 6) fail("exponent too large");
        const int e = std::stoi(digits) * (negative ? -1 : 1);
        try {
            return pow(base, e);
        } catch (const not_a_unit& ex) {
            throw parse_error(std::string("negative power of non-unit (") + ex.what() + ")", at);
        }
    }

    std::string read_digits()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    SuperElem primary()
    {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            SuperElem r = expr();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return SuperElem::constant(table_, Rational(read_digits()));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (auto v = table_->find(name)) return SuperElem::variable(table_, *v);
            if (auto it = params_.find(name); it != params_.end()) return SuperElem::constant(table_, it->second);
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const TablePtr& table_;
    const ParamMap& params_;
    std::size_t pos_ = 0;
};

inline std::string format_magnitude(const Rational& c, const TermKey& key, const VarTable& table)
{
    std::string factors;
    auto append = [&factors](const std::string& f) {
        if (!factors.empty()) factors += '*';
        factors += f;
    };
    for (std::size_t i = 0; i < key.exps.size(); ++i) {
        const int e = key.exps[i];
        if (e == 0) continue;
        append(e == 1 ? table.even_names()[i] : table.even_names()[i] + "^" + std::to_string(e));
    }
    for (OddSet s = key.odd; s != 0; s &= s - 1) {
        append(table.odd_names()[static_cast<std::size_t>(std::countr_zero(s))]);
    }
    const Rational mag = abs(c);
    if (factors.empty()) return mag.get_str();
    if (mag == 1) return factors;
    return mag.get_str() + "*" + factors;
}

} // namespace detail

inline SuperElem parse(std::string_view text, const TablePtr& table, const ParamMap& params = {})
{
    return detail::ExprParser(text, table, params).parse_all();
}

inline std::string format(const SuperElem& a)
{
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, c] : a.terms()) {
        const bool negative = c < 0;
        if (first) {
            if (negative) out += '-';
        } else {
            out += negative ? " - " : " + ";
        }
        out += detail::format_magnitude(c, key, *a.table());
        first = false;
    }
    return out;
}

} // namespace supergeo
