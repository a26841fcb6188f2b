#include "hecke3/rational.hpp"

#include <cctype>

namespace hecke3 {

Rat rat_from_string(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    Rat q(t);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

long val2(const Int& n) {
    if (n == 0) throw std::domain_error("val2(0)");
    return static_cast<long>(mpz_scan1(n.get_mpz_t(), 0));
}

long val2(const Rat& q) {
    if (q == 0) throw std::domain_error("val2(0)");
    return val2(Int(q.get_num())) - val2(Int(q.get_den()));
}

long valp(const Int& n, const Int& p) {
    if (n == 0) throw std::domain_error("valp(0)");
    long v = 0;
    Int a = abs(n), r;
    while (true) {
        Int quo;
        mpz_fdiv_qr(quo.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        a = quo;
        ++v;
    }
    return v;
}

long valp(const Rat& q, const Int& p) {
    if (q == 0) throw std::domain_error("valp(0)");
    return valp(Int(q.get_num()), p) - valp(Int(q.get_den()), p);
}

std::string gauss_to_string(const GaussRat& z) {
    if (z.im == 0) return rat_to_string(z.re);
    std::string im_part;
    if (z.im == 1)
        im_part = "i";
    else if (z.im == -1)
        im_part = "-i";
    else
        im_part = rat_to_string(z.im) + "*i";
    if (z.re == 0) return im_part;
    if (z.im > 0 && im_part[0] != '-') return rat_to_string(z.re) + "+" + im_part;
    return rat_to_string(z.re) + im_part;
}

GaussRat gauss_from_string(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw std::invalid_argument("empty Gaussian literal");

    auto parse_term = [](const std::string& term, GaussRat& acc) {
        if (term.empty()) throw std::invalid_argument("malformed Gaussian literal");
        std::string body = term;
        bool imag = false;
        if (body.back() == 'i') {
            imag = true;
            body.pop_back();
            if (!body.empty() && body.back() == '*') body.pop_back();
            if (body.empty() || body == "+") body = "1";
            if (body == "-") body = "-1";
        }
        Rat v = rat_from_string(body);
        if (imag)
            acc.im += v;
        else
            acc.re += v;
    };

    GaussRat out;
    std::string term;
    for (size_t k = 0; k < t.size(); ++k) {
        char c = t[k];
        if ((c == '+' || c == '-') && k > 0 && t[k - 1] != '/' && t[k - 1] != '*' &&
            t[k - 1] != '+' && t[k - 1] != '-') {
            parse_term(term, out);
            term.clear();
        }
        term.push_back(c);
    }
    parse_term(term, out);
    return out;
}

}  // namespace hecke3
