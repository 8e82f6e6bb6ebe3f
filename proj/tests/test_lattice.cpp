#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace tropcert;
using fixtures::iv;
using fixtures::pt;

namespace {

RatVec rv(std::initializer_list<const char*> xs) {
  RatVec out;
  for (const char* x : xs) out.push_back(parse_rational(x));
  return out;
}

// Leibniz expansion; only used on tiny matrices.
Rat leibniz(const RatMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rat total = 0;
  do {
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    Rat term = sign;
    for (std::size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Largest k with a nonzero k x k minor.
std::size_t minor_rank(const RatMatrix& a) {
  std::size_t best = 0;
  const std::size_t r = a.rows(), c = a.cols();
  for (std::uint32_t rm = 1; rm < (1u << r); ++rm)
    for (std::uint32_t cm = 1; cm < (1u << c); ++cm) {
      const auto k = static_cast<std::size_t>(__builtin_popcount(rm));
      if (k != static_cast<std::size_t>(__builtin_popcount(cm)) || k <= best) continue;
      RatMatrix m(k, k);
      std::size_t i = 0;
      for (std::size_t x = 0; x < r; ++x) {
        if (!(rm >> x & 1)) continue;
        std::size_t j = 0;
        for (std::size_t y = 0; y < c; ++y)
          if (cm >> y & 1) m(i, j++) = a(x, y);
        ++i;
      }
      if (leibniz(m) != 0) best = k;
    }
  return best;
}

IntMatrix rows_of(const std::vector<IntVec>& v, std::size_t n) { return IntMatrix::from_rows(v, n); }

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("rationals parse into lowest terms") {
    CHECK(parse_rational("6/4") == Rat(3, 2));
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("+8")) == "8");
    CHECK(to_string(parse_rational("0/7")) == "0");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("1.5"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
  }

  TEST_CASE("primitive_vector") {
    auto a = primitive_vector(rv({"2", "4"}));
    CHECK(a.direction == iv({1, 2}));
    CHECK(a.scale == 2);
    auto b = primitive_vector(rv({"1/2", "1/2"}));
    CHECK(b.direction == iv({1, 1}));
    CHECK(b.scale == Rat(1, 2));
    auto c = primitive_vector(rv({"0", "-3", "6"}));
    CHECK(c.direction == iv({0, -1, 2}));
    CHECK(c.scale == 3);
    CHECK_THROWS_AS(primitive_vector(rv({"0", "0"})), Error);

    SUBCASE("idempotent and exhaustive divisor check") {
      std::mt19937_64 rng(11);
      std::uniform_int_distribution<long> x(-40, 40), q(1, 9);
      for (int t = 0; t < 300; ++t) {
        RatVec v = {Rat(x(rng), q(rng)), Rat(x(rng), q(rng)), Rat(x(rng), q(rng))};
        for (auto& r : v) r.canonicalize();
        if (is_zero(v)) continue;
        const auto p = primitive_vector(v);
        CHECK(scale(p.scale, to_rat(p.direction)) == v);
        CHECK(p.scale > 0);
        for (long k = 2; k <= 40; ++k) {
          bool all = true;
          for (const Int& z : p.direction) all = all && z % k == 0;
          CHECK_FALSE(all);
        }
        const auto again = primitive_vector(to_rat(p.direction));
        CHECK(again.scale == 1);
        CHECK(again.direction == p.direction);
      }
    }
  }

  TEST_CASE("lattice_length") {
    CHECK(lattice_length(pt({0, 0}), pt({1, 0})) == 1);
    CHECK(lattice_length(pt({0, 0}), pt({2, 4})) == 2);
    CHECK(lattice_length(pt({0, 0}), rv({"1/2", "1/2"})) == Rat(1, 2));
    CHECK_THROWS_AS(lattice_length(pt({1, 1}), pt({1, 1})), Error);

    SUBCASE("symmetric and additive along primitive directions") {
      std::mt19937_64 rng(5);
      std::uniform_int_distribution<long> x(-20, 20), q(1, 7);
      for (int t = 0; t < 200; ++t) {
        const RatVec p = {Rat(x(rng), q(rng)), Rat(x(rng), q(rng))};
        IntVec u = {Int(x(rng)), Int(x(rng))};
        if (is_zero(u)) continue;
        u = primitive_vector(to_rat(u)).direction;
        Rat k(std::abs(x(rng)) + 1, q(rng));
        k.canonicalize();
        const RatVec r = add(p, scale(k, to_rat(u)));
        CHECK(lattice_length(p, r) == k);
        CHECK(lattice_length(r, p) == k);
      }
    }
  }

  TEST_CASE("smith_invariants") {
    CHECK(smith_invariants(IntMatrix::identity(2)) == std::vector<Int>{1, 1});
    CHECK(smith_invariants(rows_of({iv({2, 0}), iv({0, 3})}, 2)) == std::vector<Int>{1, 6});
    CHECK(smith_invariants(rows_of({iv({1, 1}), iv({1, 1})}, 2)) == std::vector<Int>{1, 0});
    CHECK(smith_invariants(rows_of({iv({1, 1}), iv({1, -1})}, 2)) == std::vector<Int>{1, 2});
    CHECK(smith_invariants(IntMatrix(2, 3)) == std::vector<Int>{0, 0});

    SUBCASE("2x2 oracle: d1 = gcd of entries, d1 d2 = |det|") {
      for (long a = -3; a <= 3; ++a)
        for (long b = -3; b <= 3; ++b)
          for (long c = -2; c <= 2; ++c)
            for (long d = -2; d <= 2; ++d) {
              const auto s = smith_invariants(rows_of({iv({a, b}), iv({c, d})}, 2));
              Int g = 0;
              for (long e : {a, b, c, d}) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Int(e).get_mpz_t());
              CHECK(s[0] == g);
              CHECK(s[0] * s[1] == Int(std::abs(a * d - b * c)));
            }
    }
  }

  TEST_CASE("rank agrees with the minor-enumeration oracle") {
    CHECK(rank_rational(RatMatrix(3, 4)) == 0);
    CHECK(rank_rational(to_rat(IntMatrix::identity(5))) == 5);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> entry(-2, 2);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    for (int t = 0; t < 1500; ++t) {
      RatMatrix a(dim(rng), dim(rng));
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = entry(rng);
      const auto prof = rank_profile(a);
      REQUIRE(prof.rank == minor_rank(a));
      CHECK(prof.rank == fixtures::oracle_rank(a));
      RatMatrix m(prof.rank, prof.rank);
      for (std::size_t i = 0; i < prof.rank; ++i)
        for (std::size_t j = 0; j < prof.rank; ++j) m(i, j) = a(prof.pivot_rows[i], prof.pivot_cols[j]);
      if (prof.rank > 0) CHECK(leibniz(m) != 0);
    }
  }

  TEST_CASE("parallel and serial rank kernels agree exactly") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> entry(-5, 5);
    for (std::size_t size : {3u, 17u, 40u}) {
      RatMatrix a(size, size + 3);
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = Rat(entry(rng), 1 + std::abs(entry(rng)));
      // force a dependency
      for (std::size_t j = 0; j < a.cols(); ++j) a(size - 1, j) = a(0, j) + a(1, j);
      const auto p = rank_profile(a);
      const auto s = rank_profile_serial(a);
      CHECK(p.rank == s.rank);
      CHECK(p.pivot_rows == s.pivot_rows);
      CHECK(p.pivot_cols == s.pivot_cols);
      CHECK(p.rank == fixtures::oracle_rank(a));
    }
  }

  TEST_CASE("extends_to_unimodular_basis") {
    CHECK(extends_to_unimodular_basis({iv({1, 0}), iv({0, 1})}, 2));
    CHECK_FALSE(extends_to_unimodular_basis({iv({1, 1}), iv({1, -1})}, 2));
    CHECK(extends_to_unimodular_basis({iv({1, 0, 0}), iv({0, 1, 0})}, 3));
    CHECK_FALSE(extends_to_unimodular_basis({iv({2, 0, 0})}, 3));
    CHECK_THROWS_AS(extends_to_unimodular_basis({iv({1, 0}), iv({0, 1}), iv({1, 1})}, 2), Error);

    SUBCASE("brute-force completion oracle in Z^2") {
      for (long a = -4; a <= 4; ++a)
        for (long b = -4; b <= 4; ++b) {
          bool found = false;
          for (long c = -5; c <= 5 && !found; ++c)
            for (long d = -5; d <= 5 && !found; ++d) found = std::abs(a * d - b * c) == 1;
          CHECK(extends_to_unimodular_basis({iv({a, b})}, 2) == found);
        }
    }

    SUBCASE("invariant under unimodular recombination and permutation") {
      std::mt19937_64 rng(3);
      std::uniform_int_distribution<long> x(-3, 3);
      for (int t = 0; t < 200; ++t) {
        std::vector<IntVec> vs = {iv({x(rng), x(rng), x(rng), x(rng)}), iv({x(rng), x(rng), x(rng), x(rng)})};
        const bool base = extends_to_unimodular_basis(vs, 4);
        const IntMatrix g = fixtures::random_unimodular(rng, 2, 6);
        std::vector<IntVec> mixed(2, IntVec(4));
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t k = 0; k < 4; ++k) mixed[i][k] = g(i, 0) * vs[0][k] + g(i, 1) * vs[1][k];
        CHECK(extends_to_unimodular_basis(mixed, 4) == base);
        std::swap(vs[0], vs[1]);
        CHECK(extends_to_unimodular_basis(vs, 4) == base);
      }
    }
  }

  TEST_CASE("hermite_completion") {
    CHECK(hermite_completion({iv({1, 0})}, 2) == std::vector<IntVec>{iv({1, 0}), iv({0, 1})});
    CHECK(hermite_completion({iv({1, 1})}, 2) == std::vector<IntVec>{iv({1, 1}), iv({0, 1})});
    CHECK(hermite_completion({iv({1, 0, 0}), iv({0, 1, 0})}, 3) ==
          std::vector<IntVec>{iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})});
    CHECK_THROWS_AS(hermite_completion({iv({1, 1}), iv({1, -1})}, 2), Error);

    SUBCASE("random saturated inputs complete to a unimodular basis") {
      std::mt19937_64 rng(17);
      for (int t = 0; t < 200; ++t) {
        const IntMatrix u = fixtures::random_unimodular(rng, 4, 20);
        const std::size_t d = 1 + t % 4;
        std::vector<IntVec> vs;
        for (std::size_t i = 0; i < d; ++i) vs.push_back(u.row(i));
        const auto full = hermite_completion(vs, 4);
        REQUIRE(full.size() == 4);
        for (std::size_t i = 0; i < d; ++i) CHECK(full[i] == vs[i]);
        const Int det = determinant(rows_of(full, 4));
        CHECK((det == 1 || det == -1));
        CHECK(hermite_completion(vs, 4) == full);
      }
    }
  }

  TEST_CASE("orthogonal lattice and integer coordinates") {
    CHECK(orthogonal_lattice_basis(iv({1, 0})) == std::vector<IntVec>{iv({0, 1})});
    const auto b = orthogonal_lattice_basis(iv({1, 1, 1}));
    REQUIRE(b.size() == 2);
    for (const auto& m : b) CHECK(dot(m, iv({1, 1, 1})) == 0);
    CHECK(extends_to_unimodular_basis(b, 3));
    const auto x = integer_coordinates(b, iv({2, -1, -1}));
    REQUIRE(x);
    CHECK(integer_coordinates({iv({2, 0})}, iv({1, 0})) == std::nullopt);
  }

  TEST_CASE("column reduction tracks the transform and its inverse") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> e(-6, 6);
    for (int t = 0; t < 100; ++t) {
      IntMatrix a(2, 4);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = e(rng);
      const auto red = column_reduce(a);
      IntMatrix prod(2, 4), id(4, 4);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          for (std::size_t k = 0; k < 4; ++k) prod(i, j) += a(i, k) * red.transform(k, j);
      CHECK(prod == red.reduced);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          for (std::size_t k = 0; k < 4; ++k) id(i, j) += red.transform(i, k) * red.inverse(k, j);
      CHECK(id == IntMatrix::identity(4));
      CHECK(red.rank == fixtures::oracle_rank(to_rat(a)));
    }
  }

  TEST_CASE("null space and rational solve") {
    const RatMatrix a = to_rat(rows_of({iv({1, 2, 3}), iv({2, 4, 6})}, 3));
    const auto ns = null_space(a);
    CHECK(ns.size() == 2);
    for (const auto& v : ns)
      for (std::size_t i = 0; i < 2; ++i) {
        Rat s = 0;
        for (std::size_t j = 0; j < 3; ++j) s += a(i, j) * v[j];
        CHECK(s == 0);
      }
    CHECK(solve_rational(a, pt({1, 2})));
    CHECK_FALSE(solve_rational(a, pt({1, 3})));
  }
}
