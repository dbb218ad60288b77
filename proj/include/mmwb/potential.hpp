#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmwb/polynomial.hpp"

namespace mmwb {

/// V = sum_j t_j q_j. In series mode each term carries its own formal
/// coupling variable t_j; `value` is used only when evaluating numerically.
struct PotentialTerm {
    GaussianRational value;
    Monomial q;
};

class Potential {
public:
    Potential() = default;
    Potential(int m, std::vector<PotentialTerm> terms);

    int colors() const { return m_; }
    int size() const { return static_cast<int>(terms_.size()); }
    const std::vector<PotentialTerm>& terms() const { return terms_; }
    const PotentialTerm& term(int j) const { return terms_[static_cast<std::size_t>(j)]; }
    /// Maximum degree D of the monomials of V.
    int degree() const;
    /// max_j |t_j|.
    double max_coupling() const;
    bool is_zero() const { return terms_.empty(); }

    std::vector<Complex> coupling_values() const;
    Polynomial<GaussianRational> as_polynomial() const;
    std::string str() const;

private:
    int m_ = 1;
    std::vector<PotentialTerm> terms_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

class SelfAdjointnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "0.5*x1^4 + x1*x2 - 3/2 x2^2" style text. Like terms are collected
/// in order of first appearance.
std::vector<std::pair<Monomial, GaussianRational>> parse_terms(std::string_view text);
Polynomial<GaussianRational> parse_polynomial(std::string_view text);
Polynomial<Rational> parse_real_polynomial(std::string_view text);
Monomial parse_monomial(std::string_view text);

/// Checks coef(class(q*)) == conj(coef(class(q))) on cyclic classes.
void check_self_adjoint(const std::vector<std::pair<Monomial, GaussianRational>>& terms);

/// Parses and validates a potential. If m == 0 the color count is inferred.
Potential parse_potential(std::string_view text, int m = 0);

}  // namespace mmwb
