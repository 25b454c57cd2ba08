#pragma once

#include "doctest.h"
#include "ncid/ncpoly.hpp"
#include "ncid/scalar.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing {

using ncid::Letter;
using ncid::NCPoly;
using ncid::Rational;
using ncid::Word;

inline Word w(std::initializer_list<Letter> letters)
{
    std::vector<Letter> v(letters);
    return Word::reduce(v);
}

inline const Letter X{0, 1}, Xi{0, -1}, Y{1, 1}, Yi{1, -1};

inline Word random_word(std::mt19937_64& rng, int ngens, std::size_t max_len, bool positive = false)
{
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<int> gen(0, ngens - 1), sign(0, 1);
    std::vector<Letter> raw;
    std::size_t n = len(rng);
    while (raw.size() < n) {
        Letter l{gen(rng), positive || sign(rng) ? 1 : -1};
        if (!raw.empty() && raw.back() == l.inverse()) continue;
        raw.push_back(l);
    }
    return Word::reduce(raw);
}

inline NCPoly random_poly(std::mt19937_64& rng, int ngens, std::size_t support, std::size_t max_len,
                          int coeff_range = 3, bool positive = false)
{
    ncid::NCPolyBuilder b;
    std::uniform_int_distribution<int> c(-coeff_range, coeff_range);
    for (std::size_t i = 0; i < support; ++i) {
        int v = c(rng);
        if (v == 0) v = 1;
        b.add(random_word(rng, ngens, max_len, positive), v);
    }
    return b.finish();
}

inline std::vector<Rational> ints(std::initializer_list<long> v)
{
    std::vector<Rational> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace testing
