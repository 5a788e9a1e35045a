#include <doctest.h>

#include "chaininf/prob.hpp"
#include "support/fixtures.hpp"
#include "support/laws.hpp"

using namespace chaininf;
using namespace chaininf::testing;

namespace {

// The Asia CPTs on two-element t/f spaces.
struct Fig1 {
  Space smoke_s{boolean_variable("smoke")};
  Space asia_s{boolean_variable("asia")};
  Space lung_s{boolean_variable("lung")};
  Space tub_s{boolean_variable("tub")};
  Space bronc_s{boolean_variable("bronc")};
  Space either_s{boolean_variable("either")};
  Space xray_s{boolean_variable("xray")};

  StateD smoke{smoke_s, vec({0.5, 0.5})};
  StateD asia{asia_s, vec({0.01, 0.99})};
  ChannelD lung = binary(smoke_s, lung_s, {0.1, 0.01});
  ChannelD tub = binary(asia_s, tub_s, {0.05, 0.01});
  ChannelD bronc = binary(smoke_s, bronc_s, {0.6, 0.3});
  ChannelD xray = binary(either_s, xray_s, {0.98, 0.05});
  ChannelD either = binary(concat(lung_s, tub_s), either_s, {1.0, 1.0, 1.0, 0.0});

  static ChannelD binary(const Space& dom, const Space& cod, std::initializer_list<double> p_true) {
    Matrix<double> m(static_cast<Eigen::Index>(p_true.size()), 2);
    Eigen::Index r = 0;
    for (double p : p_true) {
      m(r, 0) = p;
      m(r, 1) = 1.0 - p;
      ++r;
    }
    return ChannelD(dom, cod, m);
  }
};

PredicateD tt(const Space& s) { return PredicateD::indicator(s, 0); }
PredicateD ff(const Space& s) { return PredicateD::indicator(s, 1); }

}  // namespace

TEST_SUITE("space") {
  TEST_CASE("sizes and row-major flattening") {
    const Space s{Variable{"a", {"x", "y"}}, Variable{"b", {"p", "q", "r"}}};
    CHECK(s.size() == 6);
    CHECK(s.strides() == std::vector<std::size_t>{3, 1});
    CHECK(s.unflatten(4) == std::vector<std::size_t>{1, 1});
    CHECK(s.label_of(5) == "y,r");
    CHECK(Space::singleton().size() == 1);
  }

  TEST_CASE("bad spaces are rejected") {
    CHECK_THROWS_AS(Space({Variable{"a", {"x", "y"}}, Variable{"a", {"x", "y"}}}), DomainError);
    CHECK_THROWS_AS(Space({Variable{"a", {"x"}}}), DomainError);
  }

  TEST_CASE("concat renames colliding names") {
    const Space s{boolean_variable("x")};
    const Space c = concat(concat(s, s), s);
    REQUIRE(c.rank() == 3);
    CHECK(c.var(0).name == "x");
    CHECK(c.var(1).name != "x");
    CHECK(c.var(2).name != c.var(1).name);
  }
}

TEST_SUITE("core values") {
  TEST_CASE("state transformation") {
    Fig1 f;
    CHECK(max_abs_diff((f.lung >> f.smoke).probs(), vec({0.055, 0.945})) < 1e-12);
    CHECK(max_abs_diff((f.tub >> f.asia).probs(), vec({0.0104, 0.9896})) < 1e-12);
    const auto w = f.smoke;
    CHECK(max_abs_diff((ChannelD::identity(w.space()) >> w).probs(), w.probs()) == 0.0);
    CHECK_THROWS_AS(f.lung >> f.asia, DomainError);
  }

  TEST_CASE("predicate transformation") {
    Fig1 f;
    CHECK(max_abs_diff((f.lung << tt(f.lung_s)).values(), vec({0.1, 0.01})) < 1e-12);
    CHECK(max_abs_diff((f.xray << ff(f.xray_s)).values(), vec({0.02, 0.95})) < 1e-12);
    CHECK(max_abs_diff((f.either << PredicateD::truth(f.either_s)).values(), Vector<double>::Ones(4)) < 1e-12);
    CHECK_THROWS_AS(f.lung << tt(f.smoke_s), DomainError);
  }

  TEST_CASE("validity") {
    Fig1 f;
    CHECK(validity(f.smoke, f.lung << tt(f.lung_s)) == doctest::Approx(0.055).epsilon(1e-12));
    CHECK(validity(f.asia, tt(f.asia_s)) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(validity(f.smoke, PredicateD::truth(f.smoke_s)) == doctest::Approx(1.0));
  }

  TEST_CASE("update") {
    Fig1 f;
    const auto updated = f.smoke / (f.lung << tt(f.lung_s));
    const auto b = f.bronc >> updated;
    CHECK(std::abs(b(0) - 0.5727) < 1e-4);
    CHECK(std::abs(b(1) - 0.4273) < 1e-4);
    CHECK(max_abs_diff((f.smoke / PredicateD::truth(f.smoke_s)).probs(), f.smoke.probs()) < 1e-15);
    CHECK(max_abs_diff((f.asia / tt(f.asia_s)).probs(), vec({1.0, 0.0})) == 0.0);
  }

  TEST_CASE("zero validity names its source") {
    const Space s{boolean_variable("x")};
    try {
      update(StateD::point(s, 0), ff(s), "x");
      FAIL("expected InconsistentEvidence");
    } catch (const InconsistentEvidence& e) {
      CHECK(e.source() == "x");
    }
  }

  TEST_CASE("sequential composition") {
    Fig1 f;
    const auto joint = tensor(f.smoke, f.asia);
    const auto e = (f.either * tensor(f.lung, f.tub)) >> joint;
    CHECK(std::abs(e(0) - 0.0648) < 1e-4);
    CHECK(std::abs(e(0) - 0.064828) < 1e-12);
    const auto id_l = ChannelD::identity(f.smoke_s);
    const auto id_r = ChannelD::identity(f.lung_s);
    CHECK(max_abs_diff((f.lung * id_l).matrix(), f.lung.matrix()) == 0.0);
    CHECK(max_abs_diff((id_r * f.lung).matrix(), f.lung.matrix()) == 0.0);
    CHECK_THROWS_AS(f.lung * f.lung, DomainError);
  }

  TEST_CASE("tensors") {
    Fig1 f;
    CHECK(max_abs_diff(tensor(f.smoke, f.asia).probs(), vec({0.005, 0.495, 0.005, 0.495})) < 1e-15);
    // printed to three significant digits
    const auto la = tensor(f.lung >> f.smoke, f.asia);
    const auto printed = vec({0.00055, 0.0544, 0.00945, 0.936});
    CHECK(max_abs_diff(la.probs(), printed) < 5e-4);
    CHECK(max_abs_diff(la.probs(), vec({0.00055, 0.05445, 0.00945, 0.93555})) < 1e-12);

    const auto id2 = tensor(ChannelD::identity(f.smoke_s), ChannelD::identity(f.asia_s));
    CHECK(max_abs_diff(id2.matrix(), ChannelD::identity(concat(f.smoke_s, f.asia_s)).matrix()) == 0.0);

    const Space two = concat(f.smoke_s, f.asia_s);
    const auto one_tt = tensor(PredicateD::truth(f.smoke_s), tt(f.asia_s));
    CHECK(max_abs_diff(one_tt.values(), vec({1, 0, 1, 0})) == 0.0);
    CHECK(one_tt.space() == two);

    const auto with_point = tensor(f.smoke, StateD::point(f.asia_s, 1));
    CHECK(max_abs_diff(marginalize(with_point, {"smoke"}).probs(), f.smoke.probs()) == 0.0);
  }

  TEST_CASE("copy, projection and marginalization") {
    Fig1 f;
    const auto d = copy_channel(f.smoke_s);
    CHECK(max_abs_diff((d >> f.smoke).probs(), vec({0.5, 0, 0, 0.5})) == 0.0);
    const Space ss = d.cod();
    const std::size_t first[] = {0};
    const std::size_t second[] = {1};
    CHECK(max_abs_diff((projection_channel(ss, first) * d).matrix(), Matrix<double>::Identity(2, 2)) == 0.0);
    CHECK(max_abs_diff((projection_channel(ss, second) * d).matrix(), Matrix<double>::Identity(2, 2)) == 0.0);

    const auto joint = tensor(f.smoke, f.asia);
    CHECK(max_abs_diff(marginalize(joint, {"smoke"}).probs(), vec({0.5, 0.5})) < 1e-15);
    CHECK(max_abs_diff(marginalize(joint, {"smoke", "asia"}).probs(), joint.probs()) == 0.0);
    CHECK_THROWS_AS(marginalize(joint, {"nope"}), DomainError);
  }

  TEST_CASE("permutations") {
    Rng rng(3);
    const Space a = random_space(rng, "a", 1), b = random_space(rng, "b", 1);
    const auto w = random_state(rng, a), r = random_state(rng, b);
    const Space ab = concat(a, b);
    const std::size_t swap[] = {1, 0};
    const auto swapped = permute_channel(ab, swap) >> tensor(w, r);
    CHECK(max_abs_diff(swapped.probs(), tensor(r, w).probs()) < 1e-15);
    CHECK(swapped.space() == concat(b, a));

    const std::size_t ident[] = {0, 1};
    CHECK(max_abs_diff(permute_channel(ab, ident).matrix(), ChannelD::identity(ab).matrix()) == 0.0);
    const auto back = permute_channel(concat(b, a), inverse_permutation(swap)) * permute_channel(ab, swap);
    CHECK(max_abs_diff(back.matrix(), ChannelD::identity(ab).matrix()) == 0.0);
    const std::size_t bad[] = {0, 0};
    CHECK_THROWS_AS(permute_channel(ab, bad), DomainError);
  }

  TEST_CASE("weakening") {
    Fig1 f;
    const Space two = concat(f.smoke_s, f.asia_s);
    CHECK(max_abs_diff(weaken(tt(f.asia_s), two, 1).values(), vec({1, 0, 1, 0})) == 0.0);
    const auto p = PredicateD(f.smoke_s, vec({0.3, 0.8}));
    CHECK(max_abs_diff(weaken(p, f.smoke_s, 0).values(), p.values()) == 0.0);
    CHECK_THROWS_AS(weaken(p, two, 1), DomainError);
  }

  TEST_CASE("conjunction") {
    Fig1 f;
    const auto p = PredicateD(f.smoke_s, vec({0.3, 0.8}));
    CHECK(max_abs_diff(conjoin(p, PredicateD::truth(f.smoke_s)).values(), p.values()) == 0.0);
    CHECK(max_abs_diff((tt(f.smoke_s) & ff(f.smoke_s)).values(), vec({0, 0})) == 0.0);
  }

  TEST_CASE("checked constructors") {
    const Space s{boolean_variable("x")};
    CHECK_THROWS_AS(StateD(s, vec({0.5, 0.6})), DomainError);
    CHECK_THROWS_AS(StateD(s, vec({1.5, -0.5})), DomainError);
    CHECK_THROWS_AS(PredicateD(s, vec({1.5, 0.5})), DomainError);
    CHECK_THROWS_AS(ChannelD(s, s, Matrix<double>::Ones(2, 2)), DomainError);
    CHECK(PredicateD(s, vec({0.0, 1.0})).is_sharp());
    CHECK_FALSE(PredicateD(s, vec({0.5, 1.0})).is_sharp());
  }

  TEST_CASE("ket rendering") {
    Fig1 f;
    CHECK(to_ket(f.lung >> f.smoke) == "0.0550|t> + 0.9450|f>");
    CHECK(to_ket(tensor(f.smoke, f.asia)) == "0.0050|t,t> + 0.4950|t,f> + 0.0050|f,t> + 0.4950|f,f>");
  }
}

TEST_SUITE("core derived") {
  // Each identity is checked against a direct computation over index loops.
  TEST_CASE("composition against explicit sums") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
      const Space a = random_space(rng, "a"), b = random_space(rng, "b"), c = random_space(rng, "c");
      const auto f = random_channel(rng, a, b), g = random_channel(rng, b, c);
      const auto w = random_state(rng, a);
      Vector<double> expect = Vector<double>::Zero(static_cast<Eigen::Index>(c.size()));
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < b.size(); ++y)
          for (std::size_t z = 0; z < c.size(); ++z)
            expect(static_cast<Eigen::Index>(z)) += w(x) * f.matrix()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) *
                                                    g.matrix()(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(z));
      CHECK(max_abs_diff(((g * f) >> w).probs(), expect) < 1e-12);
    }
  }

  TEST_CASE("weakened validity equals marginal validity") {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
      const Space a = random_space(rng, "a", 1), b = random_space(rng, "b", 1);
      const auto w = random_state(rng, concat(a, b));
      const auto p = random_predicate(rng, a);
      const auto q = random_predicate(rng, b);
      CHECK(std::abs(validity(w, tensor(p, PredicateD::truth(b))) - validity(marginalize(w, {a.var(0).name}), p)) < 1e-12);
      CHECK(std::abs(validity(w, weaken(q, w.space(), 1)) - validity(marginalize(w, {b.var(0).name}), q)) < 1e-12);
      double direct = 0.0;
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < b.size(); ++y) direct += w(x * b.size() + y) * q(y);
      CHECK(std::abs(validity(w, weaken(q, w.space(), 1)) - direct) < 1e-12);
    }
  }

  TEST_CASE("conditioning by a conjunction is sequential conditioning") {
    Rng rng(13);
    const auto r = law_update_chain(rng, 200);
    CHECK(r.max_error < 1e-12);
  }
}

TEST_SUITE("core laws") {
  TEST_CASE("randomized law suite") {
    for (const auto& r : core_laws(2024, 500)) {
      INFO(r.name);
      CHECK(r.cases >= 500);
      CHECK(r.max_error < 1e-12);
    }
  }

  TEST_CASE("observation shift") {
    Rng rng(5);
    CHECK(law_observation_shift(rng, 500).max_error < 1e-12);
  }

  TEST_CASE("normalization is preserved by every operation") {
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
      const Space a = random_space(rng, "a"), b = random_space(rng, "b");
      const auto c = random_channel(rng, a, b);
      const auto w = random_state(rng, a);
      CHECK(std::abs((c >> w).probs().sum() - 1.0) < 1e-9);
      CHECK(std::abs((w / random_predicate(rng, a)).probs().sum() - 1.0) < 1e-9);
      CHECK(((c * ChannelD::identity(a)).matrix().rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);
    }
  }

  TEST_CASE("single precision instantiation") {
    const Space s{boolean_variable("x")};
    const Space t{boolean_variable("y")};
    Matrix<float> m(2, 2);
    m << 0.1f, 0.9f, 0.01f, 0.99f;
    const Channel<float> c(s, t, m);
    const State<float> w(s, Vector<float>::Constant(2, 0.5f));
    const auto out = c >> w;
    CHECK(out(0) == doctest::Approx(0.055f).epsilon(1e-5));
    CHECK(validity(w, c << Predicate<float>::indicator(t, 0)) == doctest::Approx(0.055f).epsilon(1e-5));
  }
}
