#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "hopfcalc/rational.hpp"
#include "hopfcalc/tensor.hpp"

using namespace hopfcalc;

namespace {

// deterministic small random rationals
struct RatGen {
  std::mt19937 rng{12345};
  Rat next() {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
    return frac(num(rng), den(rng));
  }
};

Matrix random_matrix(RatGen& g, int64_t r, int64_t c) {
  Matrix m(r, c);
  for (int64_t i = 0; i < r; ++i)
    for (int64_t j = 0; j < c; ++j) m(i, j) = g.next();
  return m;
}

}  // namespace

TEST_CASE("rational string round trip") {
  CHECK(rat_str(frac(3, 4)) == "3/4");
  CHECK(rat_str(frac(-8, 2)) == "-4");
  CHECK(rat_str(Rat(0)) == "0");
  CHECK(rat_parse("3/4") == frac(3, 4));
  CHECK(rat_parse("-5") == Rat(-5));
  CHECK(rat_parse("6/4") == frac(3, 2));
  CHECK_THROWS(rat_parse("x"));
}

TEST_CASE("rational arithmetic is an exact field on random triples") {
  RatGen g;
  for (int iter = 0; iter < 200; ++iter) {
    Rat a = g.next(), b = g.next(), c = g.next();
    CHECK(a + (-a) == 0);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!is_zero(a)) CHECK(a * (1 / a) == 1);
  }
}

TEST_CASE("rref on the spec examples") {
  SECTION("identity") {
    auto rr = rref(Matrix::identity(2));
    CHECK(rr.rank == 2);
    CHECK(rr.pivots == std::vector<int64_t>{0, 1});
    CHECK(rr.reduced == Matrix::identity(2));
  }
  SECTION("dependent rows") {
    Matrix m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(1, 0) = 2;
    m(1, 1) = 4;
    auto rr = rref(m);
    CHECK(rr.rank == 1);
    CHECK(rr.reduced(0, 0) == 1);
    CHECK(rr.reduced(0, 1) == 2);
    CHECK(is_zero(rr.reduced(1, 0)));
    CHECK(is_zero(rr.reduced(1, 1)));
  }
  SECTION("permutation") {
    Matrix m(2, 2);
    m(0, 1) = 1;
    m(1, 0) = 1;
    auto rr = rref(m);
    CHECK(rr.rank == 2);
    CHECK(rr.reduced == Matrix::identity(2));
  }
}

TEST_CASE("rref preserves the kernel") {
  RatGen g;
  for (int iter = 0; iter < 20; ++iter) {
    Matrix m = random_matrix(g, 4, 6);
    auto rr = rref(m);
    for (const auto& v : kernel_basis(rr.reduced)) {
      auto mv = m.apply(v);
      for (const auto& q : mv) CHECK(is_zero(q));
    }
    for (const auto& v : kernel_basis(m)) {
      auto rv = rr.reduced.apply(v);
      for (const auto& q : rv) CHECK(is_zero(q));
    }
    CHECK(kernel_basis(m).size() == static_cast<size_t>(6 - rr.rank));
  }
}

TEST_CASE("solve_linear distinguished solutions") {
  SECTION("identity") {
    Matrix a = Matrix::identity(3);
    std::vector<Rat> b{Rat(1), Rat(-2), frac(1, 3)};
    auto x = solve_linear(a, b);
    REQUIRE(x);
    CHECK(*x == b);
  }
  SECTION("underdetermined zeroes free variables") {
    Matrix a(1, 2);
    a(0, 0) = 1;
    a(0, 1) = 1;
    auto x = solve_linear(a, {Rat(2)});
    REQUIRE(x);
    CHECK((*x)[0] == 2);
    CHECK(is_zero((*x)[1]));
  }
  SECTION("inconsistent") {
    Matrix a(2, 1);
    a(0, 0) = 1;
    a(1, 0) = 1;
    CHECK_FALSE(solve_linear(a, {Rat(1), Rat(2)}));
  }
}

TEST_CASE("matrix inverse") {
  RatGen g;
  int found = 0;
  for (int iter = 0; iter < 20; ++iter) {
    Matrix m = random_matrix(g, 3, 3);
    auto inv = inverse(m);
    if (!inv) continue;
    ++found;
    CHECK(m * *inv == Matrix::identity(3));
    CHECK(*inv * m == Matrix::identity(3));
  }
  CHECK(found > 10);
  CHECK_FALSE(inverse(Matrix(2, 2)));
}

TEST_CASE("contract: matrix times inverse gives identity") {
  RatGen g;
  Matrix m = random_matrix(g, 3, 3);
  while (!inverse(m)) m = random_matrix(g, 3, 3);
  Matrix mi = *inverse(m);
  SparseTensor prod = contract(m.to_tensor(), mi.to_tensor(), {{1, 0}});
  CHECK(prod == sparse_identity(3));
}

TEST_CASE("contract with a zero tensor is zero") {
  SparseTensor z(Index{3, 4});
  RatGen g;
  Matrix m = random_matrix(g, 4, 2);
  SparseTensor r = contract(z, m.to_tensor(), {{1, 0}});
  CHECK(r.is_zero_tensor());
  CHECK(r.shape() == Index{3, 2});
}

TEST_CASE("contract agrees with the naive dense product oracle") {
  RatGen g;
  for (int iter = 0; iter < 10; ++iter) {
    Matrix a = random_matrix(g, 2, 3), b = random_matrix(g, 3, 4);
    // naive triple loop oracle
    Matrix expect(2, 4);
    for (int64_t i = 0; i < 2; ++i)
      for (int64_t j = 0; j < 4; ++j)
        for (int64_t k = 0; k < 3; ++k) expect(i, j) += a(i, k) * b(k, j);
    SparseTensor got = contract(a.to_tensor(), b.to_tensor(), {{1, 0}});
    CHECK(Matrix::from_tensor(got) == expect);
  }
}

TEST_CASE("contract is bilinear and matches a dense oracle on rank-3 tensors") {
  RatGen g;
  auto random_tensor = [&](Index shape) {
    SparseTensor t(shape);
    std::vector<int64_t> idx(shape.size());
    std::function<void(size_t)> rec = [&](size_t ax) {
      if (ax == shape.size()) {
        t.set(idx, g.next());
        return;
      }
      for (int64_t i = 0; i < shape[ax]; ++i) {
        idx[ax] = i;
        rec(ax + 1);
      }
    };
    rec(0);
    return t;
  };
  SparseTensor a = random_tensor({2, 3, 2});
  SparseTensor a2 = random_tensor({2, 3, 2});
  SparseTensor b = random_tensor({3, 2, 4});

  // oracle: full dense loops contracting a axes (1,2) with b axes (0,1)
  auto oracle = [&](const SparseTensor& x, const SparseTensor& y) {
    SparseTensor r(Index{2, 4});
    for (int64_t i = 0; i < 2; ++i)
      for (int64_t l = 0; l < 4; ++l) {
        Rat s(0);
        for (int64_t j = 0; j < 3; ++j)
          for (int64_t k = 0; k < 2; ++k) s += x.at({i, j, k}) * y.at({j, k, l});
        r.set({i, l}, s);
      }
    return r;
  };
  std::vector<std::pair<int, int>> axes{{1, 0}, {2, 1}};
  CHECK(contract(a, b, axes) == oracle(a, b));
  CHECK(contract(a + a2, b, axes) == contract(a, b, axes) + contract(a2, b, axes));
  CHECK(contract(a.scaled(frac(7, 3)), b, axes) == contract(a, b, axes).scaled(frac(7, 3)));
}

TEST_CASE("permute and outer") {
  SparseTensor t(Index{2, 3});
  t.set({1, 2}, Rat(5));
  SparseTensor p = permute(t, {1, 0});
  CHECK(p.at({2, 1}) == 5);
  SparseTensor u(Index{2});
  u.set({0}, Rat(2));
  SparseTensor o = outer(t, u);
  CHECK(o.at({1, 2, 0}) == 10);
  CHECK(o.shape() == Index{2, 3, 2});
}

TEST_CASE("rank-0 tensors behave as scalars") {
  SparseTensor s = SparseTensor::scalar(Rat(3));
  SparseTensor t(Index{2});
  t.set({0}, frac(1, 2));
  SparseTensor o = outer(s, t);
  CHECK(o.shape() == Index{2});
  CHECK(o.at({0}) == frac(3, 2));
}
