#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mmwb {

/// Word in the noncommuting letters X_1..X_m. Letters are stored 0-based.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::string letters) : w_(std::move(letters)) {}
    Monomial(std::initializer_list<int> letters) {
        for (int l : letters) w_.push_back(static_cast<char>(l));
    }
    static Monomial letter(int i) { return Monomial(std::string(1, static_cast<char>(i))); }
    static Monomial power(int i, int p) { return Monomial(std::string(static_cast<std::size_t>(p), static_cast<char>(i))); }

    std::size_t degree() const { return w_.size(); }
    bool empty() const { return w_.empty(); }
    int operator[](std::size_t k) const { return static_cast<unsigned char>(w_[k]); }
    const std::string& letters() const { return w_; }
    int max_letter() const;

    Monomial sub(std::size_t pos, std::size_t len = std::string::npos) const { return Monomial(w_.substr(pos, len)); }
    Monomial reversed() const { return Monomial(std::string(w_.rbegin(), w_.rend())); }
    Monomial rotated(std::size_t k) const;
    int count(int i) const;

    /// Text form, 1-based: "x1^2*x2", "1" for the empty word.
    std::string str() const;

    friend Monomial operator*(const Monomial& a, const Monomial& b) { return Monomial(a.w_ + b.w_); }
    Monomial& operator*=(const Monomial& b) {
        w_ += b.w_;
        return *this;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    /// Degree first, then lexicographic.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        if (a.w_.size() != b.w_.size()) return a.w_.size() <=> b.w_.size();
        return a.w_.compare(b.w_) <=> 0;
    }

private:
    std::string w_;
};

/// Lexicographically least rotation of q.
Monomial cyclic_canonical(const Monomial& q);

/// All distinct canonical words of given degree over m letters.
std::vector<Monomial> canonical_words(int m, int degree);

/// All words of given degree over m letters.
std::vector<Monomial> all_words(int m, int degree);

struct MonomialHash {
    std::size_t operator()(const Monomial& q) const { return std::hash<std::string>{}(q.letters()); }
};

}  // namespace mmwb
