#include "adm/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adm/error.hpp"

namespace adm::io {

using json = nlohmann::ordered_json;

namespace {

json parse_doc(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(Reason::parse, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  require(j.is_object(), Reason::parse, "expected a JSON object");
  auto it = j.find(key);
  require(it != j.end(), Reason::parse, std::string("missing field \"") + key + "\"");
  return *it;
}

double real_of(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>());
  fail(Reason::parse, "expected a real number, got " + j.dump());
}

std::vector<double> reals_of(const json& j) {
  require(j.is_array(), Reason::parse, "expected an array of reals");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(real_of(x));
  return out;
}

Complex complex_of(const json& j) {
  if (j.is_array()) {
    require(j.size() == 2, Reason::parse, "complex entries are [re, im] pairs");
    return {real_of(j[0]), real_of(j[1])};
  }
  return {real_of(j), 0.0};
}

Vector vector_of(const json& j) {
  require(j.is_array(), Reason::parse, "expected an array of complex entries");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_of(j[i]);
  return v;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v[i]));
  return a;
}

std::size_t count_of(const json& j) {
  require(j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0), Reason::parse,
          "expected a nonnegative integer, got " + j.dump());
  return j.get<std::size_t>();
}

WeightSeq sequence_of(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  auto values = [&] { return j.contains("values") ? reals_of(j["values"]) : std::vector<double>{}; };
  if (kind == "finite") return WeightSeq::finite(values());
  if (kind == "finitely-supported") return WeightSeq::finitely_supported(values());
  if (kind == "geometric-tail") {
    return WeightSeq::geometric_tail(values(), real_of(field(j, "tail_first")), real_of(field(j, "tail_ratio")));
  }
  if (kind == "one-minus-geometric") {
    return WeightSeq::one_minus_geometric(values(), real_of(field(j, "tail_first")), real_of(field(j, "tail_ratio")));
  }
  if (kind == "periodic") return WeightSeq::periodic(values(), reals_of(field(j, "cycle")));
  if (kind == "interleave") {
    const json& parts = field(j, "parts");
    require(parts.is_array(), Reason::parse, "\"parts\" must be an array");
    std::vector<WeightSeq> ps;
    for (const auto& p : parts) ps.push_back(sequence_of(p));
    return WeightSeq::interleave(std::move(ps));
  }
  fail(Reason::parse, "unknown sequence kind \"" + kind + "\"");
}

json sequence_json(const WeightSeq& xi) {
  using Kind = WeightSeq::Kind;
  json j;
  switch (xi.kind()) {
    case Kind::finite: j["kind"] = "finite"; break;
    case Kind::finitely_supported: j["kind"] = "finitely-supported"; break;
    case Kind::geometric_tail: j["kind"] = "geometric-tail"; break;
    case Kind::one_minus_geometric: j["kind"] = "one-minus-geometric"; break;
    case Kind::periodic: j["kind"] = "periodic"; break;
    case Kind::interleave: {
      j["kind"] = "interleave";
      json parts = json::array();
      for (const auto& p : xi.parts()) parts.push_back(sequence_json(p));
      j["parts"] = std::move(parts);
      return j;
    }
  }
  j["values"] = xi.head();
  if (xi.kind() == Kind::geometric_tail || xi.kind() == Kind::one_minus_geometric) {
    j["tail_first"] = xi.tail_first();
    j["tail_ratio"] = xi.tail_ratio();
  }
  if (xi.kind() == Kind::periodic) j["cycle"] = xi.cycle();
  return j;
}

template <class F>
auto guarded(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(Reason::parse, e.what());
  }
}

}  // namespace

double parse_real(std::string_view s) {
  const std::string str(s);
  const auto slash = str.find('/');
  if (slash != std::string::npos) {
    const double num = parse_real(str.substr(0, slash));
    const double den = parse_real(str.substr(slash + 1));
    require(den != 0.0, Reason::parse, "zero denominator in \"" + str + "\"");
    return num / den;
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  require(!str.empty() && end == str.c_str() + str.size() && errno == 0, Reason::parse,
          "not a real number: \"" + str + "\"");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Reason::parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Reason::parse, "cannot write " + path);
  out << text;
}

WeightSeq parse_sequence(std::string_view text) {
  return guarded([&] { return sequence_of(parse_doc(text)); });
}

std::string sequence_to_json(const WeightSeq& xi) { return sequence_json(xi).dump(2) + "\n"; }

HermOp parse_operator(std::string_view text) {
  return guarded([&] {
    const json j = parse_doc(text);
    if (j.contains("diag")) return HermOp::diagonal(reals_of(j["diag"]));
    const std::size_t n = count_of(field(j, "dim"));
    const json& e = field(j, "entries");
    require(e.is_array(), Reason::parse, "\"entries\" must be an array");
    require(e.size() == n * n, Reason::dimension,
            "operator of dim " + std::to_string(n) + " needs " + std::to_string(n * n) + " entries, got " +
                std::to_string(e.size()));
    const auto d = static_cast<Eigen::Index>(n);
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) m(r, c) = complex_of(e[static_cast<std::size_t>(r * d + c)]);
    }
    return HermOp(std::move(m));
  });
}

std::string operator_to_json(const HermOp& a) {
  json j;
  j["dim"] = a.dim();
  json e = json::array();
  for (Eigen::Index r = 0; r < a.dim(); ++r) {
    for (Eigen::Index c = 0; c < a.dim(); ++c) e.push_back(complex_json(a.matrix()(r, c)));
  }
  j["entries"] = std::move(e);
  return j.dump(2) + "\n";
}

RankOneDecomp parse_decomposition(std::string_view text) {
  return guarded([&] {
    const json j = parse_doc(text);
    const json& terms = field(j, "terms");
    require(terms.is_array(), Reason::parse, "\"terms\" must be an array");
    RankOneDecomp d(j.contains("dim") ? static_cast<Eigen::Index>(count_of(j["dim"])) : 0);
    for (const auto& t : terms) {
      Vector v = vector_of(field(t, "vector"));
      require(std::abs(v.norm() - 1.0) <= 1e-12, Reason::parse, "decomposition vectors must have unit norm");
      d.add(real_of(field(t, "weight")), UnitVec(std::move(v)));
    }
    return d;
  });
}

std::string decomposition_to_json(const RankOneDecomp& d, const std::vector<TermOrigin>* origins) {
  json j;
  j["dim"] = d.dim();
  json terms = json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    json t;
    t["weight"] = d[i].weight;
    if (origins && i < origins->size()) t["origin"] = origin_label((*origins)[i]);
    t["vector"] = vector_json(d[i].vector.coords());
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j.dump(2) + "\n";
}

ProjectionStream parse_stream(std::string_view text, std::uint64_t default_seed) {
  return guarded([&] {
    const json j = parse_doc(text);
    const std::string kind = field(j, "kind").get<std::string>();
    ProjectionStream s;
    if (kind == "orthonormal-basis") {
      s = ProjectionStream::orthonormal_basis();
    } else if (kind == "explicit") {
      const json& vs = field(j, "vectors");
      require(vs.is_array(), Reason::parse, "\"vectors\" must be an array");
      std::vector<Vector> vecs;
      for (const auto& v : vs) vecs.push_back(vector_of(v));
      s = ProjectionStream::explicit_vectors(std::move(vecs));
    } else if (kind == "block-overlap") {
      const std::uint64_t seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : default_seed;
      s = ProjectionStream::block_overlap(count_of(field(j, "block")), seed);
    } else {
      fail(Reason::parse, "unknown stream kind \"" + kind + "\"");
    }
    if (j.contains("count")) s = s.truncated(count_of(j["count"]));
    return s;
  });
}

std::string stream_to_json(const ProjectionStream& s) {
  json j;
  switch (s.kind()) {
    case ProjectionStream::Kind::orthonormal_basis: j["kind"] = "orthonormal-basis"; break;
    case ProjectionStream::Kind::explicit_vectors: {
      j["kind"] = "explicit";
      json vs = json::array();
      for (const auto& v : s.vectors()) vs.push_back(vector_json(v));
      j["vectors"] = std::move(vs);
      break;
    }
    case ProjectionStream::Kind::block_overlap:
      j["kind"] = "block-overlap";
      j["block"] = s.block();
      j["seed"] = s.seed();
      break;
  }
  if (s.count()) j["count"] = *s.count();
  return j.dump(2) + "\n";
}

Matrix parse_isometry(std::string_view text) {
  return guarded([&] {
    const json j = parse_doc(text);
    const std::size_t rows = count_of(field(j, "rows"));
    const std::size_t cols = count_of(field(j, "cols"));
    const json& e = field(j, "entries");
    require(e.is_array() && e.size() == rows * cols, Reason::dimension,
            "isometry needs rows * cols = " + std::to_string(rows * cols) + " entries");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_of(e[r * cols + c]);
      }
    }
    return m;
  });
}

std::string isometry_to_json(const Matrix& v) {
  json j;
  j["rows"] = v.rows();
  j["cols"] = v.cols();
  json e = json::array();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) e.push_back(complex_json(v(r, c)));
  }
  j["entries"] = std::move(e);
  return j.dump(2) + "\n";
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace adm::io
