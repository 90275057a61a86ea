#include <doctest.h>

#include "wwnf/resonance.hpp"

#include <algorithm>

using namespace wwnf;

TEST_CASE("classification of the basic patterns") {
    ResonanceTuple triv;
    triv.pairs = {{3, +1}, {3, -1}, {7, +1}, {7, -1}};
    CHECK(classify(triv) == ResonanceClass::Trivial);

    ResonanceTuple bf;
    bf.pairs = {{-1, +1}, {4, -1}, {9, +1}, {4, -1}};
    CHECK(classify(bf) == ResonanceClass::NonTrivial);

    ResonanceTuple nr;
    nr.pairs = {{1, +1}, {2, +1}, {3, -1}}; // sqrt1 + sqrt2 - sqrt3 != 0
    CHECK(classify(nr) == ResonanceClass::NotResonant);
}

TEST_CASE("classification is permutation and sign-flip invariant") {
    ResonanceTuple t;
    t.pairs = {{-1, +1}, {4, -1}, {9, +1}, {4, -1}};
    ResonanceTuple perm = t;
    std::rotate(perm.pairs.begin(), perm.pairs.begin() + 2, perm.pairs.end());
    CHECK(classify(t) == classify(perm));

    ResonanceTuple flip = t;
    for (auto& [j, s] : flip.pairs) s = -s;
    CHECK(classify(flip) == classify(t));
}

TEST_CASE("Benjamin-Feir family members are non-trivial resonances") {
    auto fam = benjamin_feir(-3, 3, 1, 3);
    CHECK(!fam.empty());
    for (const auto& t : fam) CHECK(classify(t) == ResonanceClass::NonTrivial);

    // (lambda, b) = (1, 1) -> (-1, 4, 9, 4)
    ResonanceTuple ref;
    ref.pairs = {{-1, +1}, {4, -1}, {9, +1}, {4, -1}};
    ref.canonicalize();
    CHECK(std::count(fam.begin(), fam.end(), ref) == 1);

    // (lambda, b) = (-1, 1) -> (1, -4, -9, -4)
    ResonanceTuple neg;
    neg.pairs = {{1, +1}, {-4, -1}, {-9, +1}, {-4, -1}};
    neg.canonicalize();
    CHECK(std::count(fam.begin(), fam.end(), neg) == 1);

    // (lambda, b) = (1, 2) -> (-4, 9, 49, 36): 2 - 3 + 7 - 6 = 0
    ResonanceTuple b2;
    b2.pairs = {{-4, +1}, {9, -1}, {49, +1}, {36, -1}};
    b2.canonicalize();
    CHECK(std::count(fam.begin(), fam.end(), b2) == 1);
}

TEST_CASE("enumeration finds the BF quadruple with one index outside") {
    TangentialSet S({4, 9});
    auto found = enumerate_low_outside(4, S);
    ResonanceTuple ref;
    ref.pairs = {{-1, +1}, {4, -1}, {9, +1}, {4, -1}};
    ref.canonicalize();
    CHECK(std::count(found.begin(), found.end(), ref) == 1);
}

TEST_CASE("odd orders have no trivial resonances and S={2} order 3 is empty") {
    TangentialSet S({2});
    auto found = enumerate_low_outside(3, S);
    CHECK(found.empty());

    TangentialSet S2({2, 3});
    for (const auto& t : enumerate_low_outside(3, S2))
        CHECK(classify(t) == ResonanceClass::NonTrivial);
}

TEST_CASE("enumeration matches a brute-force ball scan") {
    // independent oracle: enumerate every momentum-constrained signed tuple
    // in the ball and keep the non-trivial resonances with <= 1 index
    // outside S; the production enumeration must return the same set
    for (auto sites : {std::vector<std::int64_t>{2}, {4, 9}, {2, 3}}) {
        TangentialSet S(sites);
        for (int order : {3, 4}) {
            const std::int64_t ball = (order - 1) * S.max_abs();
            std::set<ResonanceTuple> brute;
            std::vector<std::int64_t> j(order, -ball);
            while (true) {
                bool ok = true;
                for (auto v : j)
                    if (v == 0) ok = false;
                if (ok) {
                    for (int sc = 0; sc < (1 << order); ++sc) {
                        ResonanceTuple t;
                        int outside = 0;
                        for (int i = 0; i < order; ++i) {
                            t.pairs.push_back({j[i], (sc >> i) & 1 ? 1 : -1});
                            if (!S.contains(j[i])) ++outside;
                        }
                        if (outside > 1) continue;
                        if (classify(t) != ResonanceClass::NonTrivial) continue;
                        t.canonicalize();
                        brute.insert(t);
                    }
                }
                int pos = order - 1;
                while (pos >= 0 && ++j[pos] > ball) j[pos--] = -ball;
                if (pos < 0) break;
            }
            auto found = enumerate_low_outside(order, S);
            std::set<ResonanceTuple> prod(found.begin(), found.end());
            CHECK(prod == brute);
        }
    }
}

TEST_CASE("genericity checks") {
    // S+ = {4, 9}, S- = {-1}: the BF quadruple has all indices inside
    TangentialSet bad({4, 9, -1});
    auto rep = is_generic(bad, 4);
    CHECK(!rep.generic);
    REQUIRE(rep.certificate.has_value());
    CHECK(classify(*rep.certificate) == ResonanceClass::NonTrivial);

    // j and -j violates the bis condition
    TangentialSet bis({5, -5});
    auto rep2 = is_generic(bis, 4);
    CHECK(!rep2.generic);
    CHECK(rep2.bis_violation == 5);

    TangentialSet good({2, 3});
    auto rep3 = is_generic(good, 6);
    CHECK(rep3.generic);
    CHECK(rep3.min_nonresonant_abs > 0);
}
