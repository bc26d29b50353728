// waring: Waring rank and minimal decompositions of binary forms.
//
//   waring rank "3x^2y"
//   waring decompose "3x^3-3x^2y+9xy^2-y^3" --count 3 --json
//   waring verify "x^3+y^3" "(x)^3 + (y)^3"
//   waring apolar "x*y^4" "dx^2"
//   waring oracle "x*y^4"
//   waring experiment --degree 5 --samples 200 --range 9

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "waring/apolarity.hpp"
#include "waring/parser.hpp"
#include "waring/waring.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace waring;

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kZero = 3, kNumeric = 4, kVerify = 5 };

struct RunConfig {
  std::string mode = "exact";
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool as_json = false;
};

struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <Scalar S>
json number(const S& v) {
  if constexpr (is_exact_v<S>) {
    return {{"re", v.real().get_str()}, {"im", v.imag().get_str()}};
  } else {
    return {{"re", to_string_shortest(v.real())}, {"im", to_string_shortest(v.imag())}};
  }
}

WaringOptions options(const RunConfig& cfg) {
  WaringOptions o;
  o.search.seed = cfg.seed;
  o.tol.verify = cfg.tol;
  return o;
}

template <Scalar S>
BinaryForm<S> read_form(const std::string& text) {
  ParseOptions po;
  po.allow_zero = false;
  return parse_form<S>(text, po);
}

template <Scalar S>
json certificate_json(const RankReport<S>& rep) {
  if (!rep.certificate) return nullptr;
  json c = json::array();
  for (const auto& v : rep.certificate->c) c.push_back(number(v));
  return {{"r", rep.certificate->r}, {"c", c}, {"certainty", to_string(rep.certainty)}};
}

template <Scalar S>
json report_json(const std::string& input, const RankReport<S>& rep, const RunConfig& cfg) {
  json j;
  j["input"] = input;
  j["degree"] = rep.degree;
  j["mode"] = cfg.mode;
  j["fRank"] = rep.f_rank ? json(*rep.f_rank) : json("aboveD");
  j["fxRank"] = rep.fx_rank;
  j["waringRank"] = rep.waring_rank;
  j["branch"] = to_string(rep.branch);
  j["decompositions"] = json::array();
  j["certificate"] = certificate_json(rep);
  j["seed"] = cfg.seed;
  return j;
}

template <Scalar S>
std::string format_value(const S& v) {
  return to_string(v);
}

template <Scalar S>
void print_report(std::ostream& out, const std::string& input, const RankReport<S>& rep, const RunConfig& cfg) {
  out << "input: " << input << "\n";
  out << "degree: " << rep.degree << "\n";
  out << "mode: " << cfg.mode << "\n";
  out << "fRank: " << (rep.f_rank ? std::to_string(*rep.f_rank) : "aboveD") << "\n";
  out << "fxRank: " << rep.fx_rank << "\n";
  out << "waringRank: " << rep.waring_rank << "\n";
  out << "branch: " << to_string(rep.branch) << "\n";
  if (rep.certificate) {
    out << "certificate: r=" << rep.certificate->r << " c=[";
    for (Eigen::Index k = 0; k < rep.certificate->c.size(); ++k)
      out << (k ? ", " : "") << format_value(rep.certificate->c[k]);
    out << "] certainty=" << to_string(rep.certainty) << "\n";
  }
  out << "seed: " << cfg.seed << "\n";
}

/// A decomposition ready for output: verified, in the backend it is exact in when possible.
struct Checked {
  std::string text;
  json terms;
  double residual = 0.0;
};

template <Scalar S>
Checked check(const BinaryForm<S>& f, const Decomposed<S>& dec, int rank, const RunConfig& cfg) {
  const auto opts = options(cfg);
  const auto rep = verify(f, dec.numeric, rank, opts);
  if (!rep.passed(cfg.tol)) throw VerificationFailed("decomposition failed verification");
  Checked out;
  out.residual = rep.relative_residual;
  out.terms = json::array();
  auto emit = [&](const auto& d) {
    out.text = format_decomposition(d);
    for (const auto& t : d.terms)
      out.terms.push_back({{"lambda", number(t.weight)}, {"p", number(t.x_coef)}, {"q", number(t.y_coef)}});
  };
  if constexpr (is_exact_v<S>) {
    if (dec.native) {
      const auto exact = verify(f, *dec.native, rank, opts);
      if (exact.max_residual != 0.0 || !exact.passed(0.0)) throw VerificationFailed("exact decomposition failed verification");
      out.residual = 0.0;
      emit(clear_denominators(*dec.native));
      return out;
    }
  }
  emit(dec.numeric);
  return out;
}

template <Scalar S>
int cmd_rank(const std::string& input, const RunConfig& cfg) {
  const auto f = read_form<S>(input);
  const auto rep = waring_rank(f, options(cfg));
  if (cfg.as_json) {
    std::cout << report_json(input, rep, cfg).dump(2) << "\n";
  } else {
    print_report(std::cout, input, rep, cfg);
  }
  return kOk;
}

template <Scalar S>
int cmd_decompose(const std::string& input, int count, const RunConfig& cfg) {
  const auto f = read_form<S>(input);
  const auto opts = options(cfg);
  const auto result = decompose(f, opts);
  const auto& rep = result.report;
  std::vector<Decomposed<S>> found;
  if (count > 1) {
    found = enumerate_decompositions(f, count, opts);
  } else if (count == 1) {
    found.push_back(result);
  }
  std::vector<Checked> checked;
  for (const auto& d : found) checked.push_back(check(f, d, rep.waring_rank, cfg));

  if (cfg.as_json) {
    auto j = report_json(input, rep, cfg);
    for (const auto& c : checked) j["decompositions"].push_back({{"terms", c.terms}, {"residual", c.residual}});
    std::cout << j.dump(2) << "\n";
  } else {
    print_report(std::cout, input, rep, cfg);
    for (const auto& c : checked) std::cout << "decomposition: " << c.text << "  residual=" << c.residual << "\n";
  }
  return kOk;
}

template <Scalar S>
int cmd_verify(const std::string& input, const std::string& dec_text, const RunConfig& cfg) {
  const auto f = read_form<S>(input);
  const auto dec = parse_decomposition<S>(dec_text);
  const auto rep = verify(f, dec, std::nullopt, options(cfg));
  const bool ok = rep.passed(cfg.tol);
  if (cfg.as_json) {
    json j{{"input", input},
           {"decomposition", dec_text},
           {"mode", cfg.mode},
           {"maxResidual", rep.max_residual},
           {"relativeResidual", rep.relative_residual},
           {"apolarityResidual", rep.apolarity_residual},
           {"lengthOk", rep.length_ok},
           {"termsPresent", rep.terms_present},
           {"passed", ok}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "maxResidual: " << rep.max_residual << "\n"
              << "relativeResidual: " << rep.relative_residual << "\n"
              << "apolarityResidual: " << rep.apolarity_residual << "\n"
              << "lengthOk: " << (rep.length_ok ? "true" : "false") << "\n"
              << "termsPresent: " << (rep.terms_present ? "true" : "false") << "\n"
              << (ok ? "verified" : "NOT verified") << "\n";
  }
  return ok ? kOk : kVerify;
}

template <Scalar S>
int cmd_apolar(const std::string& input, const std::string& op_text, const RunConfig& cfg) {
  const auto f = read_form<S>(input);
  const auto g = parse_operator<S>(op_text);
  const auto image = apply_operator(g, f);
  const std::string text = format_form(image);
  if (cfg.as_json) {
    json j{{"input", input}, {"operator", format_operator(g)}, {"mode", cfg.mode}, {"image", text}, {"isZero", image.is_zero()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text << "\n";
  }
  return kOk;
}

template <Scalar S>
int cmd_oracle(const std::string& input, const RunConfig& cfg) {
  const auto f = read_form<S>(input);
  SearchOptions so;
  so.seed = cfg.seed;
  const auto res = oracle_rank(f, so);
  if (cfg.as_json) {
    json j{{"input", input}, {"mode", cfg.mode}, {"oracleRank", res.rank}, {"certainty", to_string(res.certainty)},
           {"seed", cfg.seed}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "oracleRank: " << res.rank << "\ncertainty: " << to_string(res.certainty) << "\n";
  }
  return kOk;
}

struct ExperimentSpec {
  int degree = 5;
  int samples = 200;
  long range = 9;
  int oracle_every = 10;
};

struct SampleRow {
  int index = 0;
  std::vector<long> coefficients;
  std::string f_rank;
  int fx_rank = 0;
  int waring_rank = 0;
  std::optional<int> oracle_rank;
  int decomposition_count = 0;
  double max_residual = 0.0;
  bool unique_ok = true;
};

template <Scalar S>
SampleRow run_sample(const ExperimentSpec& spec, int index, const RunConfig& cfg) {
  SampleRow row;
  row.index = index;
  std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  std::vector<S> mono;
  do {
    row.coefficients.clear();
    mono.clear();
    for (int i = 0; i <= spec.degree; ++i) {
      row.coefficients.push_back(draw_integer(rng, spec.range));
      mono.push_back(from_integer<S>(row.coefficients.back()));
    }
  } while (std::all_of(row.coefficients.begin(), row.coefficients.end(), [](long c) { return c == 0; }));
  const auto f = from_monomial<S>(spec.degree, mono);

  RunConfig sample_cfg = cfg;
  sample_cfg.seed = mix_seed(cfg.seed ^ 0x5eedu, static_cast<std::uint64_t>(index));
  const auto opts = options(sample_cfg);
  const auto result = decompose(f, opts);
  const auto& rep = result.report;
  row.f_rank = rep.f_rank ? std::to_string(*rep.f_rank) : "aboveD";
  row.fx_rank = rep.fx_rank;
  row.waring_rank = rep.waring_rank;

  std::vector<Decomposed<S>> decs{result};
  const int d = spec.degree;
  if (d % 2 == 0 && rep.waring_rank == d / 2 + 1) decs = enumerate_decompositions(f, 3, opts);
  for (const auto& dec : decs) {
    const auto v = verify(f, dec.numeric, rep.waring_rank, opts);
    if (!v.passed(cfg.tol)) throw VerificationFailed("sample " + std::to_string(index) + " failed verification");
    row.max_residual = std::max(row.max_residual, v.relative_residual);
  }
  row.decomposition_count = static_cast<int>(decs.size());

  if (rep.waring_rank <= (d + 1) / 2) {
    auto other = opts;
    other.search.seed = opts.search.seed + 1;
    row.unique_ok = same_decomposition(decompose(f, other).numeric, result.numeric, 1e-8);
  }
  if (spec.oracle_every > 0 && index % spec.oracle_every == 0) {
    SearchOptions so;
    so.seed = sample_cfg.seed;
    row.oracle_rank = oracle_rank(f, so).rank;
  }
  return row;
}

template <Scalar S>
int cmd_experiment(const ExperimentSpec& spec, const RunConfig& cfg) {
  if (spec.degree < 1 || spec.samples < 1 || spec.range < 1 || spec.oracle_every < 0)
    throw CLI::ValidationError("experiment", "need degree >= 1, samples >= 1, range >= 1, oracle-every >= 0");
  std::map<int, int> histogram;
  int mismatches = 0, uniqueness_failures = 0;
  std::vector<SampleRow> rows;
  for (int i = 0; i < spec.samples; ++i) {
    rows.push_back(run_sample<S>(spec, i, cfg));
    const auto& row = rows.back();
    ++histogram[row.waring_rank];
    if (row.oracle_rank && *row.oracle_rank != row.waring_rank) ++mismatches;
    if (!row.unique_ok) ++uniqueness_failures;
  }
  auto coeff_text = [](const std::vector<long>& c) {
    std::string s;
    for (std::size_t k = 0; k < c.size(); ++k) s += (k ? ";" : "") + std::to_string(c[k]);
    return s;
  };
  const int expected = spec.degree / 2 + 1;
  if (cfg.as_json) {
    json j;
    j["degree"] = spec.degree;
    j["samples"] = spec.samples;
    j["range"] = spec.range;
    j["mode"] = cfg.mode;
    j["seed"] = cfg.seed;
    j["expectedGenericRank"] = expected;
    json h = json::object();
    for (const auto& [r, n] : histogram) h[std::to_string(r)] = n;
    j["rankHistogram"] = h;
    j["mismatches"] = mismatches;
    j["uniquenessFailures"] = uniqueness_failures;
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"sampleIndex", r.index},
                           {"coefficients", r.coefficients},
                           {"fRank", r.f_rank},
                           {"fxRank", r.fx_rank},
                           {"waringRank", r.waring_rank},
                           {"oracleRank", r.oracle_rank ? json(*r.oracle_rank) : json(nullptr)},
                           {"decompositionCount", r.decomposition_count},
                           {"maxResidual", r.max_residual}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "sampleIndex,coefficients,fRank,fxRank,waringRank,oracleRank,decompositionCount,maxResidual\n";
    for (const auto& r : rows)
      std::cout << r.index << "," << coeff_text(r.coefficients) << "," << r.f_rank << "," << r.fx_rank << ","
                << r.waring_rank << "," << (r.oracle_rank ? std::to_string(*r.oracle_rank) : "") << ","
                << r.decomposition_count << "," << to_string_shortest(r.max_residual) << "\n";
    std::cout << "# expectedGenericRank " << expected << "\n";
    for (const auto& [r, n] : histogram) std::cout << "# rank " << r << ": " << n << "\n";
    std::cout << "# mismatches " << mismatches << "\n# uniquenessFailures " << uniqueness_failures << "\n";
  }
  return kOk;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DegreeError& e) {
    std::cerr << "degree error: " << e.what() << "\n";
    return kParse;
  } catch (const ZeroFormError& e) {
    std::cerr << "zero form: " << e.what() << "\n";
    return kZero;
  } catch (const VerificationFailed& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerify;
  } catch (const WaringError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
}

/// Runs `body` for the positional form, or for every line of --file.
template <class F>
int for_each_input(const std::string& form, const std::string& file, F&& body) {
  if (file.empty()) {
    if (form.empty()) {
      std::cerr << "a form argument or --file is required\n";
      return kUsage;
    }
    return guarded([&] { return body(form); });
  }
  std::ifstream in(file);
  if (!in) {
    std::cerr << "cannot open " << file << "\n";
    return kUsage;
  }
  int status = kOk;
  for (const auto& line : read_form_lines(in)) {
    const int rc = guarded([&] { return body(line); });
    if (status == kOk) status = rc;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waring rank and minimal decompositions of binary forms"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string form, second, file;
  int count = 1;
  ExperimentSpec spec;

  app.add_option("--mode", cfg.mode, "Arithmetic backend")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--seed", cfg.seed, "Seed for every randomized search");
  app.add_option("--tol", cfg.tol, "Relative verification tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--json", cfg.as_json, "Machine-readable output");

  auto* rank = app.add_subcommand("rank", "F-rank, F-rank of df/dx and Waring rank");
  rank->add_option("form", form);
  rank->add_option("--file", file, "One form per line")->check(CLI::ExistingFile);

  auto* dec = app.add_subcommand("decompose", "Minimal decompositions, verified before printing");
  dec->add_option("form", form);
  dec->add_option("--file", file, "One form per line")->check(CLI::ExistingFile);
  dec->add_option("--count", count, "Number of distinct decompositions")->check(CLI::NonNegativeNumber);

  auto* ver = app.add_subcommand("verify", "Check a decomposition against a form");
  ver->add_option("form", form)->required();
  ver->add_option("decomposition", second)->required();

  auto* apo = app.add_subcommand("apolar", "Apply a differential operator in dx, dy");
  apo->add_option("form", form)->required();
  apo->add_option("operator", second)->required();

  auto* ora = app.add_subcommand("oracle", "Rank from squarefree annihilators");
  ora->add_option("form", form);
  ora->add_option("--file", file, "One form per line")->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("experiment", "Random integer forms of one degree, CSV rows");
  exp->add_option("--degree", spec.degree)->required();
  exp->add_option("--samples", spec.samples);
  exp->add_option("--range", spec.range, "Coefficients drawn from [-range, range]");
  exp->add_option("--oracle-every", spec.oracle_every, "Cross-check every k-th sample with the oracle; 0 disables");

  for (auto* sub : {rank, dec, ver, apo, ora, exp}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  std::cout.precision(17);

  auto dispatch = [&]<Scalar S>() -> int {
    if (*rank) return for_each_input(form, file, [&](const std::string& s) { return cmd_rank<S>(s, cfg); });
    if (*dec) return for_each_input(form, file, [&](const std::string& s) { return cmd_decompose<S>(s, count, cfg); });
    if (*ora) return for_each_input(form, file, [&](const std::string& s) { return cmd_oracle<S>(s, cfg); });
    if (*ver) return guarded([&] { return cmd_verify<S>(form, second, cfg); });
    if (*apo) return guarded([&] { return cmd_apolar<S>(form, second, cfg); });
    return guarded([&] { return cmd_experiment<S>(spec, cfg); });
  };
  return cfg.mode == "exact" ? dispatch.operator()<GaussRational>() : dispatch.operator()<Complex>();
}
