// dcmodel: validate tuples, run the verification suite, write demo tuples.
//
// Exit codes: 0 pass, 1 validation failure, 2 numerical-check failure,
// 3 I/O, parse or usage error.

#include "dcmodel/dcmodel.hpp"

#include <iostream>

#include "CLI11.hpp"

namespace {

constexpr int kExitIo = 3;

std::vector<dcmodel::Index> parse_dims(const std::string& text) {
  std::vector<dcmodel::Index> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      dims.push_back(static_cast<dcmodel::Index>(v));
    } catch (const std::exception&) {
      throw dcmodel::Error(dcmodel::ErrorKind::ParseError, "bad --dims entry \"" + item + "\"");
    }
  }
  return dims;
}

int parse_degree(const std::string& text) {
  if (text == "adaptive") return -1;
  try {
    std::size_t used = 0;
    const int d = std::stoi(text, &used);
    if (used == text.size() && d >= 1) return d;
  } catch (const std::exception&) {
  }
  throw dcmodel::Error(dcmodel::ErrorKind::ParseError, "--degree must be a positive integer or \"adaptive\"");
}

void print(const dcmodel::VerificationReport& rep, const std::string& format) {
  std::cout << dcmodel::emit_report(rep, format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-space verification for doubly commuting pure contraction tuples"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

  dcmodel::SuiteOptions opt;

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check contractivity, commutation and purity");
  validate->add_option("file", validate_path, "Tuple JSON file")->required();
  validate->add_option("--check-tol", opt.cfg.check_tol, "Tolerance for exact identities");

  std::string suite_path;
  std::string degree = "adaptive";
  std::string report_path;
  auto* suite = app.add_subcommand("suite", "Run the full verification suite");
  suite->add_option("file", suite_path, "Tuple JSON file")->required();
  suite->add_option("--degree", degree, "Truncation degree N, or adaptive")->capture_default_str();
  suite->add_option("--tail-tol", opt.cfg.tail_tol, "Tolerance for truncated identities")->capture_default_str();
  suite->add_option("--check-tol", opt.cfg.check_tol, "Tolerance for exact identities")->capture_default_str();
  suite->add_option("--rank-tol", opt.cfg.rank_tol, "Relative cutoff for numerical rank")->capture_default_str();
  suite->add_option("--boundary-samples", opt.boundary_samples, "Boundary points for the inner check")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  suite->add_option("--margin", opt.margin, "Top layers excluded from truncated comparisons (default degree/2)");
  suite->add_option("--report", report_path, "Also write the JSON report here");

  std::string kind;
  std::string dims_text;
  double radius = 0.4;
  std::uint64_t seed = 1;
  std::string out_path;
  auto* demo = app.add_subcommand("demo", "Write a demo tuple file");
  demo->add_option("kind", kind, "tensor, random or jordan")->required()->check(CLI::IsMember({"tensor", "random", "jordan"}));
  demo->add_option("--dims", dims_text, "Factor dimensions, comma separated")->required();
  demo->add_option("--radius", radius, "Factor norm (tensor, random) or Jordan scale")->capture_default_str();
  demo->add_option("--seed", seed, "Random seed")->capture_default_str();
  demo->add_option("--out", out_path, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  try {
    if (*validate) {
      const auto rep = dcmodel::run_validate(dcmodel::read_tuple_file(validate_path).tuple(), opt);
      print(rep, format);
      return rep.exit_code();
    }
    if (*suite) {
      opt.degree = parse_degree(degree);
      const auto tuple = dcmodel::read_tuple_file(suite_path).tuple();
      const auto rep = dcmodel::run_full_suite(tuple, opt);
      print(rep, format);
      if (!report_path.empty()) dcmodel::write_text_file(report_path, dcmodel::emit_report(rep, "json"));
      return rep.exit_code();
    }
    if (*demo) {
      const auto tf = dcmodel::generate_demo(kind, parse_dims(dims_text), radius, seed);
      dcmodel::write_tuple_file(out_path, tf);
      const auto rep = dcmodel::run_validate(tf.tuple(), opt);
      if (!rep.passed()) {
        print(rep, format);
        return rep.exit_code();
      }
      std::cout << "wrote " << out_path << " (n = " << tf.n << ", dim = " << tf.dim << ")\n";
      return 0;
    }
  } catch (const dcmodel::Error& e) {
    std::cerr << "error [" << dcmodel::to_string(e.kind()) << "]: " << e.what() << "\n";
    switch (e.kind()) {
      case dcmodel::ErrorKind::IoError:
      case dcmodel::ErrorKind::ParseError:
        return kExitIo;
      case dcmodel::ErrorKind::DimensionMismatch:
      case dcmodel::ErrorKind::FactorNotContractive:
      case dcmodel::ErrorKind::FactorNotPure:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
