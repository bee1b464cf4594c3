#include "factcheck/service/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "factcheck/core/json.hpp"
#include "factcheck/eval/harness.hpp"
#include "factcheck/service/checker.hpp"
#include "factcheck/service/server.hpp"

namespace factcheck::service {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Trailing whitespace only; leading text is kept so spans match the file.
std::string rstrip(std::string text) {
  text.erase(text.find_last_not_of(" \t\r\n") + 1);
  return text;
}

void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty() || output == "-") {
    out << text << '\n';
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + output + "'");
  f << text << '\n';
}

ApiConfig load_config_or_usage(const std::string& path) {
  if (path.empty()) throw UsageError("--api_config is required");
  if (!std::filesystem::exists(path)) throw UsageError("config file '" + path + "' does not exist");
  return load_api_config(path);
}

std::string summary_line(const FactReport& r) {
  std::ostringstream s;
  s << r.claims.size() << " claims, " << r.verdicts.size() << " verified; credibility ";
  if (r.credibility_percent)
    s << std::fixed << std::setprecision(1) << *r.credibility_percent << '%';
  else
    s << "n/a";
  const char* sep = " (";
  for (auto l : kAllLabels) {
    s << sep << to_string(l) << ' ' << r.counts[l];
    sep = ", ";
  }
  s << ')';
  return s.str();
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const ModalRegistry& modals) {
  CLI::App app{"Open-domain fact checking of free text"};
  app.name("factcheck");

  std::string modal = "string", input, api_config, language, output;
  app.add_option("--modal", modal, "Input modality: string (input is the text) or text (input is a file path)");
  app.add_option("--input", input, "The text, or the path of a text file");
  app.add_option("--api_config", api_config, "YAML file with providers, search and service settings");
  app.add_option("--language", language, "Language code of the input (defaults to the config's)");
  app.add_option("--output", output, "Write JSON here instead of standard output");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string host;
  int port = -1;
  serve_cmd->add_option("--api_config", api_config)->required();
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port);

  auto* eval_cmd = app.add_subcommand("eval", "Score a checker against a labeled claim dataset");
  std::string dataset, format = "unified", mode = "mock", baseline_kind;
  std::size_t concurrency = 8;
  eval_cmd->add_option("--dataset", dataset)->required();
  eval_cmd->add_option("--format", format, "factool_qa | factcheck_bench | unified");
  eval_cmd->add_option("--mode", mode, "mock | live")->check(CLI::IsMember({"mock", "live"}));
  eval_cmd->add_option("--baseline", baseline_kind, "always_true | always_false (no calls made)")
      ->check(CLI::IsMember({"always_true", "always_false"}));
  eval_cmd->add_option("--api_config", api_config);
  eval_cmd->add_option("--concurrency", concurrency)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--output", output);
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*serve_cmd) {
      auto config = load_config_or_usage(api_config);
      if (!host.empty()) config.service.host = host;
      if (port >= 0) config.service.port = port;
      return serve(config);
    }

    if (*eval_cmd) {
      const auto fmt = eval::parse_dataset_format(format);
      if (!std::filesystem::exists(dataset)) throw UsageError("dataset '" + dataset + "' does not exist");
      const auto ds = eval::load_dataset(dataset, fmt);
      for (const auto& w : ds.warnings) err << "warning: " << w << '\n';
      eval::EvalReport report;
      if (!baseline_kind.empty()) {
        report = eval::baseline(ds, baseline_kind == "always_true");
      } else {
        auto config = load_config_or_usage(api_config);
        select_backend(config, mode == "live");
        auto pipe = make_pipeline(config);
        async::EventLoop loop;
        auto outcomes = loop.run(eval::check_claims(*pipe, ds.claims, concurrency));
        report = eval::summarize(ds, outcomes, config.label_rule, config.default_provider);
      }
      err << eval::format_metrics_table(report);
      if (report.cost) err << eval::format_cost_table(report);
      emit(eval::to_json(report).dump(2), output, out);
      return kExitOk;
    }

    const auto plugin = modals.find(modal);
    if (plugin == modals.end() && modal != "string" && modal != "text") {
      if (modal == "speech" || modal == "image" || modal == "video")
        throw UsageError("modal '" + modal +
                         "' is an unimplemented extension; register a ModalPreprocessor for it, or convert the "
                         "input to text and use --modal text");
      throw UsageError("unknown modal '" + modal + "'; expected string or text");
    }
    if (input.empty()) throw UsageError("--input is required");
    std::string text;
    if (plugin != modals.end()) {
      const auto raw = read_file(input);
      text = rstrip(plugin->second->to_text(std::vector<unsigned char>(raw.begin(), raw.end())));
    } else {
      text = modal == "text" ? rstrip(read_file(input)) : input;
    }
    FactChecker checker(load_config_or_usage(api_config));
    CheckOptions opts;
    if (!language.empty()) opts.language = language;
    const auto report = checker.check_response(text, opts);
    err << summary_line(report) << '\n';
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    emit(to_canonical_json(report), output, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace factcheck::service
