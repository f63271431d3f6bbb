// weilverify: run exact verification suites and print a JSON or CSV report.
//
// Exit status: 0 all checks pass, 1 some check fails, 2 configuration error.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "canonweil/canonweil.hpp"

int main(int argc, char** argv) {
  canonweil::SuiteConfig config;
  CLI::App app{"Exact verification of the canonical Weil representation over F_p"};
  app.add_option("--p", config.p, "odd prime p");
  app.add_option("--n", config.n, "half-dimension n of V");
  app.add_option("--suite", config.suite, "suite name, or 'all'");
  app.add_option("--samples", config.samples, "sample count for sampled suites");
  app.add_option("--seed", config.seed, "seed for sampled inputs");
  app.add_option("--out", config.out, "output path, '-' for stdout");
  const std::map<std::string, canonweil::ReportFormat> formats{{"json", canonweil::ReportFormat::json},
                                                               {"csv", canonweil::ReportFormat::csv}};
  app.add_option("--format", config.format, "json or csv")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_flag("--timing", config.timing, "include wall-clock duration in the JSON report");
  bool list = false;
  app.add_flag("--list", list, "print the suite names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& name : canonweil::suite_names()) std::cout << name << '\n';
    return 0;
  }

  canonweil::Report report;
  try {
    report = canonweil::run_suite(config);
  } catch (const canonweil::config_error& e) {
    std::cerr << "weilverify: " << e.what() << '\n';
    return 2;
  }

  const std::string text = canonweil::emit_report(report);
  if (config.out == "-") {
    std::cout << text;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file || !(file << text)) {
      std::cerr << "weilverify: cannot write " << config.out << '\n';
      return 2;
    }
  }
  if (!config.timing) std::cerr << "weilverify: " << report.duration_ms << " ms\n";
  return canonweil::exit_status(report);
}
