#include <doctest.h>

#include <cstring>
#include <functional>
#include <random>

#include "adm/error.hpp"
#include "adm/io.hpp"
#include "testkit.hpp"

using namespace adm;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

Reason reason_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.reason();
  }
  return Reason::assertion;
}

}  // namespace

TEST_CASE("sequence documents round trip") {
  const std::vector<WeightSeq> seqs{
      WeightSeq::finite({0.1, 1.0 / 3.0, 0.7}),
      WeightSeq::finitely_supported({0.25}),
      WeightSeq::geometric_tail({0.9}, 0.25, 0.5),
      WeightSeq::one_minus_geometric({}, 0.4, 0.6),
      WeightSeq::periodic({0.3}, {1.0, 0.5}),
      WeightSeq::interleave({WeightSeq::finite({0.2}), WeightSeq::periodic({}, {0.75})}),
  };
  for (const auto& s : seqs) {
    const std::string text = io::sequence_to_json(s);
    const WeightSeq back = io::parse_sequence(text);
    CHECK(io::sequence_to_json(back) == text);
    for (std::size_t i = 0; i < 6; ++i) {
      if (s.length().is_finite() && i >= s.length().value()) break;
      CHECK(same_bits(back.at(i), s.at(i)));
    }
  }
}

TEST_CASE("reals may be fractions or strings") {
  const auto s = io::parse_sequence(R"({"kind": "finite", "values": ["1/3", "0.25", 0.5]})");
  CHECK(s.at(0) == 1.0 / 3.0);
  CHECK(s.at(1) == 0.25);
  CHECK(io::parse_real("2/4") == 0.5);
  CHECK_THROWS_AS(io::parse_real("1/0"), Error);
  CHECK_THROWS_AS(io::parse_real("abc"), Error);
}

TEST_CASE("operator and decomposition documents round trip bit-exactly") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 20; ++it) {
    const Eigen::Index dim = 1 + it % 4;
    RankOneDecomp d(dim);
    for (int j = 0; j < 3; ++j) d.add(std::uniform_real_distribution<double>(0, 2)(rng), testkit::random_unit(rng, dim));
    const std::string dt = io::decomposition_to_json(d);
    const RankOneDecomp d2 = io::parse_decomposition(dt);
    REQUIRE(d2.size() == d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
      CHECK(same_bits(d2[j].weight, d[j].weight));
      for (Eigen::Index i = 0; i < dim; ++i) {
        CHECK(same_bits(d2[j].vector.coords()[i].real(), d[j].vector.coords()[i].real()));
        CHECK(same_bits(d2[j].vector.coords()[i].imag(), d[j].vector.coords()[i].imag()));
      }
    }
    CHECK(io::decomposition_to_json(d2) == dt);

    const HermOp a = frame_operator(d);
    const std::string at = io::operator_to_json(a);
    CHECK(io::operator_to_json(io::parse_operator(at)) == at);

    const Matrix v = testkit::gaussian(rng, dim);
    const std::string vt = io::isometry_to_json(v);
    CHECK(io::isometry_to_json(io::parse_isometry(vt)) == vt);
  }
}

TEST_CASE("stream documents") {
  const auto s = io::parse_stream(R"({"kind": "block-overlap", "block": 3})", 7);
  CHECK(s.seed() == 7);
  CHECK(io::stream_to_json(io::parse_stream(io::stream_to_json(s))) == io::stream_to_json(s));
  const auto t = io::parse_stream(R"({"kind": "orthonormal-basis", "count": 4})");
  CHECK(t.size() == std::optional<std::size_t>(4));
  CHECK(reason_of([] { io::parse_stream(R"({"kind": "spiral"})"); }) == Reason::parse);
}

TEST_CASE("malformed documents are parse errors, shape errors are dimension errors") {
  CHECK(reason_of([] { io::parse_sequence("{"); }) == Reason::parse);
  CHECK(reason_of([] { io::parse_sequence(R"({"values": []})"); }) == Reason::parse);
  CHECK(reason_of([] { io::parse_operator(R"({"dim": 2, "entries": [1, 0, 0]})"); }) == Reason::dimension);
  CHECK(reason_of([] { io::parse_decomposition(R"({"terms": [{"weight": 1, "vector": [1, 1]}]})"); }) ==
        Reason::parse);
  CHECK(reason_of([] { io::read_file("/nonexistent/file.json"); }) == Reason::parse);
}

TEST_CASE("digest is stable") {
  CHECK(io::digest("") == "cbf29ce484222325");
  CHECK(io::digest("a") == "af63dc4c8601ec8c");
}
