#include <gtest/gtest.h>

#include <random>

#include "print.hpp"
#include "mqf/integers.hpp"
#include "mqf/interval.hpp"
#include "mqf/lattice_walk.hpp"
#include "oracles.hpp"

using namespace mqf;

namespace {

FieldElement elem(const MultiquadField& f, std::initializer_list<std::pair<Mask, Rational>> terms) {
  FieldElement x(f);
  for (const auto& [I, c] : terms) x.set(I, c);
  return x;
}

long fundamental_discriminant(long d) { return ((d % 4) + 4) % 4 == 1 ? d : 4 * d; }

const std::vector<std::pair<long, long>> kBiquadratic = {
    {2, 3}, {3, 2}, {2, 5}, {5, 2}, {5, 13}, {3, 7}, {6, 10}, {2, 7}, {3, 5}, {7, 11}, {5, 17}, {6, 15}, {10, 11},
    {13, 17}, {3, 11}, {14, 15}, {5, 21}, {21, 33}};

}  // namespace

TEST(IsAlgebraicInteger, Examples) {
  auto f = MultiquadField::make({3, 2});
  EXPECT_TRUE(is_algebraic_integer(elem(f, {{2, Rational(1, 2)}, {3, Rational(1, 2)}})));
  auto g = MultiquadField::make({2});
  EXPECT_FALSE(is_algebraic_integer(elem(g, {{0, Rational(1, 2)}, {1, Rational(1, 2)}})));
  auto h = MultiquadField::make({5, 13});
  auto w1 = elem(h, {{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  auto w2 = elem(h, {{0, Rational(1, 2)}, {2, Rational(1, 2)}});
  EXPECT_TRUE(is_algebraic_integer(w1 * w2));
}

TEST(IsAlgebraicInteger, QuadraticTextbookRule) {
  for (long D : {2L, 3L, 5L, 6L, 7L, 13L, 17L, 21L, 55L}) {
    auto f = MultiquadField::make({D});
    for (long a = -20; a <= 20; ++a) {
      for (long b = -20; b <= 20; ++b) {
        auto x = elem(f, {{0, Rational(a, 2)}, {1, Rational(b, 2)}});
        EXPECT_EQ(is_algebraic_integer(x), oracle::quadratic_half_integral(a, b, D)) << D << " " << a << " " << b;
      }
    }
  }
}

TEST(BiquadraticBasis, StandardResidueClasses) {
  auto f = MultiquadField::make({3, 2});
  auto b = biquadratic_basis(f).basis;
  std::vector<FieldElement> want{FieldElement::rational(f, 1), FieldElement::basis(f, 1), FieldElement::basis(f, 2),
                                 elem(f, {{2, Rational(1, 2)}, {3, Rational(1, 2)}})};
  EXPECT_EQ(b, want);

  auto g = MultiquadField::make({5, 13});
  auto w1 = elem(g, {{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  auto w2 = elem(g, {{0, Rational(1, 2)}, {2, Rational(1, 2)}});
  std::vector<FieldElement> want_g{FieldElement::rational(g, 1), w1, w2, w1 * w2};
  EXPECT_EQ(biquadratic_basis(g).basis, want_g);
}

TEST(BiquadraticBasis, DiscriminantMatchesConductorFormula) {
  // disc(O_K) = d_1 d_2 d_3 over the three quadratic subfields, and
  // det(Tr(b_i b_j)) = det(B)^2 * prod_I 4 p_I for a basis with matrix B.
  for (const auto& [p, q] : kBiquadratic) {
    auto f = MultiquadField::make({p, q});
    IntegralBasis ib = biquadratic_basis(f);
    ASSERT_EQ(ib.basis.size(), 4u);
    Rational gram = 1;
    for (Mask I = 0; I < 4; ++I) gram *= 4 * f.radicand(I);
    Rational det = detail::basis_determinant(ib.basis);
    long disc = 1;
    for (Mask I = 1; I < 4; ++I) disc *= fundamental_discriminant(f.radicand(I).get_si());
    EXPECT_EQ(det * det * gram, Rational(disc)) << p << "," << q;
    for (const auto& x : ib.basis) EXPECT_TRUE(is_algebraic_integer(x));
    for (const auto& x : ib.basis) {
      for (const auto& y : ib.basis) EXPECT_TRUE(is_algebraic_integer(x * y));
    }
  }
}

TEST(BiquadraticBasis, SearchOracleAgrees) {
  // p = 5, q = 2 is outside the two named classes of the example.
  auto f = MultiquadField::make({5, 2});
  auto searched = detail::biquadratic_basis_by_search(f);
  auto chosen = biquadratic_basis(f).basis;
  EXPECT_EQ(abs(detail::basis_determinant(searched)), abs(detail::basis_determinant(chosen)));
  EXPECT_EQ(abs(detail::basis_determinant(chosen)), Rational(1, 4));
  // Maximal: no integral coset representative of (1/4) Z^4 / Z[basis] is missing.
  std::size_t integral_cosets = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          auto x = elem(f, {{0, Rational(a, 4)}, {1, Rational(b, 4)}, {2, Rational(c, 4)}, {3, Rational(d, 4)}});
          if (is_algebraic_integer(x)) ++integral_cosets;
        }
  // index [O_K : Z[sqrt p_I]] = 1 / |det|
  EXPECT_EQ(Rational(integral_cosets), 1 / abs(detail::basis_determinant(chosen)));
}

TEST(BiquadraticBasis, WrongDegree) {
  try {
    biquadratic_basis(MultiquadField::make({2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongDegree);
  }
}

TEST(LatticeBox, QuadraticExample) {
  auto f = MultiquadField::make({2});
  auto box = superset_lattice_box(f, {Rational(3), Rational(3)});
  EXPECT_EQ(box.denominator, 2);
  EXPECT_EQ(box.bound(0), 3);
  EXPECT_EQ(box.bound(1), 2);
  // Brute force over Z[sqrt 2]: every integer with both |embeddings| <= 3.
  long max_a = 0, max_b = 0;
  for (long a = -10; a <= 10; ++a)
    for (long b = -10; b <= 10; ++b) {
      long double r = std::sqrt(2.0L);
      if (std::fabs(a + b * r) <= 3 && std::fabs(a - b * r) <= 3) {
        max_a = std::max(max_a, std::abs(a));
        max_b = std::max(max_b, std::abs(b));
        EXPECT_TRUE(box.contains(elem(f, {{0, a}, {1, b}})));
      }
    }
  EXPECT_EQ(max_a, 3);
  EXPECT_EQ(max_b, 2);
}

TEST(LatticeBox, ZeroBounds) {
  auto f = MultiquadField::make({2, 3});
  auto box = superset_lattice_box(f, std::vector<Rational>(4, Rational(0)));
  EXPECT_EQ(box.point_count(), 1);
}

TEST(LatticeBox, BiquadraticExample) {
  auto f = MultiquadField::make({2, 3});
  auto box = superset_lattice_box(f, std::vector<Rational>(4, Rational(10)));
  EXPECT_EQ(box.bound(3), 4);  // 4 sqrt 6 = 9.80 <= 10 < 4.25 sqrt 6
  EXPECT_TRUE(Rational(4 * 4 * 6) <= 100 && Rational(17 * 17 * 6, 16) > 100);
  // Brute force over O_K = Z<1, sqrt2, sqrt3, (sqrt2 + sqrt6)/2>.
  auto basis = biquadratic_basis(f).basis;
  for (long a = -12; a <= 12; ++a)
    for (long b = -8; b <= 8; ++b)
      for (long c = -7; c <= 7; ++c)
        for (long d = -9; d <= 9; ++d) {
          FieldElement x = basis[0] * Rational(a) + basis[1] * Rational(b) + basis[2] * Rational(c) + basis[3] * Rational(d);
          bool inside = true;
          for (Mask t = 0; t < 4 && inside; ++t) {
            Enclosure e = enclose(x, t);
            inside = e.hi <= 10 && e.lo >= -10;
          }
          if (inside) {
            EXPECT_TRUE(box.contains(x)) << to_string(x);
          }
        }
}

TEST(LatticeBox, SoundOnRandomIntegers) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> coef(-9, 9);
  std::size_t checked = 0;
  for (const auto& [p, q] : kBiquadratic) {
    auto f = MultiquadField::make({p, q});
    auto basis = biquadratic_basis(f).basis;
    for (int trial = 0; trial < 60; ++trial) {
      FieldElement x(f);
      for (const auto& b : basis) x += b * Rational(coef(rng));
      auto box = superset_lattice_box(f, abs_embedding_bounds(x));
      EXPECT_TRUE(box.contains(x)) << to_string(x);
      ++checked;
    }
  }
  EXPECT_GE(checked, 1000u);
}

TEST(LatticeWalker, EllipsoidMatchesFilter) {
  auto f = MultiquadField::make({2, 3});
  auto box = superset_lattice_box(f, std::vector<Rational>(4, Rational(3)));
  LatticeWalker full(box), pruned(box);
  const Integer R = 200;
  pruned.set_ellipsoid(R);
  std::size_t inside = 0, visited = 0;
  full.walk(
      [&](std::span<const std::int64_t> m) {
        Integer s = 0;
        for (Mask I = 0; I < 4; ++I) s += Integer(static_cast<long>(m[I] * m[I])) * f.radicand(I);
        if (s <= R) ++inside;
        return Visit::Continue;
      },
      UINT64_MAX);
  pruned.walk(
      [&](std::span<const std::int64_t>) {
        ++visited;
        return Visit::Continue;
      },
      UINT64_MAX);
  EXPECT_EQ(inside, visited);
  EXPECT_GT(visited, 0u);
}
