#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adm/bridge.hpp"
#include "adm/carpenter.hpp"
#include "adm/checkers.hpp"
#include "adm/error.hpp"
#include "adm/io.hpp"
#include "adm/seqkit.hpp"

namespace adm::cli {

namespace {

using json = nlohmann::ordered_json;

// JSON has no infinities; they are written as strings.
json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

struct Input {
  std::string path;
  std::string text;
};

class Run {
 public:
  explicit Run(std::string command) { rep_["command"] = std::move(command); }

  const std::string& load(const std::string& path) {
    // read first: a throw inside the braced init leaks `path` on GCC 11
    std::string text = io::read_file(path);
    inputs_.push_back({path, std::move(text)});
    json in;
    in["file"] = std::filesystem::path(path).filename().string();
    in["digest"] = io::digest(inputs_.back().text);
    rep_["inputs"].push_back(std::move(in));
    return inputs_.back().text;
  }

  void write(const std::string& path, const std::string& text, const char* role) {
    io::write_file(path, text);
    json o;
    o["role"] = role;
    o["file"] = std::filesystem::path(path).filename().string();
    o["digest"] = io::digest(text);
    rep_["outputs"].push_back(std::move(o));
  }

  json& operator[](const char* key) { return rep_[key]; }
  json& verdicts() { return rep_["verdicts"]; }

  // Runs `body`, which returns the exit code; adm::Error becomes a named
  // reason. The report is printed and optionally saved.
  int finish(const std::function<int()>& body, const std::string& report_path, std::ostream& out,
             std::ostream& err) {
    int code = kOk;
    try {
      code = body();
    } catch (const Error& e) {
      code = (e.reason() == Reason::parse || e.reason() == Reason::dimension) ? kBadInput : kRefused;
      rep_["reason"] = std::string(reason_name(e.reason()));
      rep_["message"] = e.what();
      err << "admtool: " << e.what() << "\n";
    }
    rep_["exit_code"] = code;
    const std::string text = rep_.dump(2) + "\n";
    out << text;
    if (!report_path.empty()) {
      try {
        io::write_file(report_path, text);
      } catch (const Error& e) {
        err << "admtool: " << e.what() << "\n";
        return kBadInput;
      }
    }
    return code;
  }

 private:
  json rep_;
  std::vector<Input> inputs_;
};

json case_json(const CaseTag& t) {
  json j;
  j["name"] = case_name(t.kind);
  j["k"] = opt(t.k);
  j["M"] = t.M.to_string();
  j["N"] = t.N.to_string();
  return j;
}

json certificate_json(const StageCertificate& c) {
  json j;
  j["stage"] = c.stage;
  j["residual"] = c.residual;
  j["terms_emitted"] = c.terms_emitted;
  j["e_touched"] = c.e_touched;
  j["frontier_e"] = opt(c.frontier_e);
  j["remainder"] = c.remainder;
  j["outstanding"] = c.outstanding;
  j["ambient_dim"] = c.ambient_dim;
  j["r_in"] = c.plan.r_in;
  j["r_out"] = c.plan.r_out;
  j["block_size"] = c.plan.eta.size();
  j["extensions"] = c.plan.extensions;
  j["elem_check"] = opt(c.plan.elem_check);
  if (c.keycase) {
    json k;
    k["sigma_abs2"] = std::norm(c.keycase->sigma);
    k["sigma_bound"] = c.keycase->sigma_bound;
    k["x_norm"] = c.keycase->x_norm;
    k["decay_excess"] = c.keycase->decay_excess;
    j["keycase"] = std::move(k);
  }
  return j;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-one projection decompositions of positive operators", "admtool"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string report_path;
  app.add_option("--report", report_path, "Also write the JSON report to this file");

  std::string seq_file, seq2_file, stream_file, op_file, decomp_file, iso_file, out_file, op_out_file, witness_file;
  double alpha = 0.5;
  double tol = 1e-8;
  double maj_tol = kSumTol;
  std::size_t stages = 10;
  std::size_t extend_limit = 10000;
  std::uint64_t seed = 0;

  auto* kad = app.add_subcommand("check-kadison", "Evaluate the Kadison condition of a sequence");
  kad->add_option("sequence", seq_file)->required();
  kad->add_option("--alpha", alpha, "Threshold splitting small from large entries")->check(CLI::Range(0.0, 1.0));

  auto* maj = app.add_subcommand("check-majorize", "Test xi < eta (majorization)");
  maj->add_option("xi", seq_file)->required();
  maj->add_option("eta", seq2_file)->required();
  maj->add_option("--tol", maj_tol);

  auto* dec = app.add_subcommand("decompose", "Realize a sequence on the operator sum of a projection stream");
  dec->add_option("sequence", seq_file)->required();
  dec->add_option("stream", stream_file)->required();
  dec->add_option("--stages", stages)->check(CLI::PositiveNumber);
  dec->add_option("--tol", tol);
  dec->add_option("--extend-limit", extend_limit);
  dec->add_option("--seed", seed, "Seed for block-overlap streams without one");
  dec->add_option("--out", out_file, "Decomposition output");
  dec->add_option("--operator-out", op_out_file, "Certified truncation of the target operator");

  auto* ver = app.add_subcommand("verify", "Recompute the residual of a decomposition against an operator");
  ver->add_option("decomposition", decomp_file)->required();
  ver->add_option("operator", op_file)->required();
  ver->add_option("--tol", tol);

  auto* sums = app.add_subcommand("check-sums", "Decide whether an operator is a sum of rank-one projections");
  sums->add_option("operator", op_file)->required();
  sums->add_option("--witness", witness_file, "Write a witness decomposition when one exists");

  auto* br = app.add_subcommand("bridge", "Convert between decompositions and partial isometries");
  br->require_subcommand(1);
  auto* to_iso = br->add_subcommand("to-isometry", "Decomposition to (A, V)");
  to_iso->add_option("decomposition", decomp_file)->required();
  to_iso->add_option("--out", out_file, "Isometry output")->required();
  to_iso->add_option("--operator-out", op_out_file, "Operator output");
  auto* to_dec = br->add_subcommand("to-decomp", "(A, V) to decomposition");
  to_dec->add_option("operator", op_file)->required();
  to_dec->add_option("isometry", iso_file)->required();
  to_dec->add_option("--out", out_file, "Decomposition output")->required();

  std::vector<std::string> argv_store{"admtool"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  if (kad->parsed()) {
    Run run("check-kadison");
    return run.finish(
        [&] {
          const WeightSeq xi = io::parse_sequence(run.load(seq_file));
          const KadisonReport k = kadison_check(xi, alpha);
          auto& v = run.verdicts();
          v["satisfied"] = k.satisfied;
          v["a"] = num(k.a);
          v["b"] = num(k.b);
          v["alpha"] = k.alpha;
          v["integer_gap"] = opt(k.integer_gap);
          return k.satisfied ? kOk : kRefused;
        },
        report_path, out, err);
  }

  if (maj->parsed()) {
    Run run("check-majorize");
    return run.finish(
        [&] {
          const WeightSeq xi = io::parse_sequence(run.load(seq_file));
          const WeightSeq eta = io::parse_sequence(run.load(seq2_file));
          const MajorizationVerdict m = majorizes(xi, eta, maj_tol);
          auto& v = run.verdicts();
          v["holds"] = m.holds;
          v["failing_index"] = opt(m.failing_index);
          v["sum_gap"] = num(m.sum_gap);
          return m.holds ? kOk : kRefused;
        },
        report_path, out, err);
  }

  if (dec->parsed()) {
    Run run("decompose");
    return run.finish(
        [&] {
          const WeightSeq xi = io::parse_sequence(run.load(seq_file));
          const ProjectionStream e = io::parse_stream(run.load(stream_file), seed);
          CarpenterOptions opts;
          opts.stages = stages;
          opts.tol = tol;
          opts.extend_limit = extend_limit;
          const CarpenterResult res = carpenter_decompose(xi, e, opts);
          run["case"] = case_json(res.tag);
          json certs = json::array();
          for (const auto& c : res.certificates) certs.push_back(certificate_json(c));
          run["certificates"] = std::move(certs);
          run["max_residual"] = res.max_residual;
          auto& v = run.verdicts();
          v["terms"] = res.decomp.size();
          v["ambient_dim"] = res.ambient_dim;
          v["stages"] = res.certificates.size();
          v["within_tol"] = res.max_residual <= tol;
          if (!out_file.empty()) run.write(out_file, io::decomposition_to_json(res.decomp, &res.origins), "decomposition");
          if (!op_out_file.empty()) run.write(op_out_file, io::operator_to_json(res.target), "operator");
          return res.max_residual <= tol ? kOk : kRefused;
        },
        report_path, out, err);
  }

  if (ver->parsed()) {
    Run run("verify");
    return run.finish(
        [&] {
          const RankOneDecomp d = io::parse_decomposition(run.load(decomp_file));
          const HermOp a = io::parse_operator(run.load(op_file));
          require(d.dim() == a.dim(), Reason::dimension,
                  "decomposition has dim " + std::to_string(d.dim()) + ", operator has dim " +
                      std::to_string(a.dim()));
          const double r = residual_norm(a, d);
          run["max_residual"] = r;
          auto& v = run.verdicts();
          v["terms"] = d.size();
          v["within_tol"] = r <= tol;
          return r <= tol ? kOk : kRefused;
        },
        report_path, out, err);
  }

  if (sums->parsed()) {
    Run run("check-sums");
    return run.finish(
        [&] {
          const HermOp a = io::parse_operator(run.load(op_file));
          const SumOfProjReport s = sum_of_projections_check(a, !witness_file.empty());
          auto& v = run.verdicts();
          v["is_sum"] = s.is_sum;
          v["excess"] = s.excess;
          v["deficiency"] = s.deficiency;
          v["gap"] = s.gap;
          v["count"] = opt(s.count);
          if (s.witness) {
            v["witness_residual"] = s.witness_residual;
            run.write(witness_file, io::decomposition_to_json(*s.witness), "witness");
          }
          return s.is_sum ? kOk : kRefused;
        },
        report_path, out, err);
  }

  if (to_iso->parsed()) {
    Run run("bridge to-isometry");
    return run.finish(
        [&] {
          const RankOneDecomp d = io::parse_decomposition(run.load(decomp_file));
          const BridgeRecord b = decomp_to_isometry(d);
          std::vector<double> w;
          for (std::size_t j : b.kept) w.push_back(d[j].weight);
          const Matrix& V = b.V.matrix;
          const double iso = (V.adjoint() * V - b.V.domain_projection.matrix()).norm();
          auto& v = run.verdicts();
          v["rows"] = V.rows();
          v["cols"] = V.cols();
          v["diag_error"] = max_abs_diff(b.diag, w);
          v["isometry_error"] = iso;
          run.write(out_file, io::isometry_to_json(V), "isometry");
          if (!op_out_file.empty()) run.write(op_out_file, io::operator_to_json(b.A), "operator");
          return kOk;
        },
        report_path, out, err);
  }

  if (to_dec->parsed()) {
    Run run("bridge to-decomp");
    return run.finish(
        [&] {
          const HermOp a = io::parse_operator(run.load(op_file));
          const Matrix V = io::parse_isometry(run.load(iso_file));
          const RankOneDecomp d = isometry_to_decomp(a, V);
          run["max_residual"] = residual_norm(a, d);
          run.verdicts()["terms"] = d.size();
          run.write(out_file, io::decomposition_to_json(d), "decomposition");
          return kOk;
        },
        report_path, out, err);
  }
  return kBadInput;
}

}  // namespace adm::cli
