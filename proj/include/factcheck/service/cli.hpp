#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace factcheck::service {

/// Exit codes of the `factcheck` command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // the check or evaluation failed
inline constexpr int kExitUsage = 2;    // bad arguments or unreadable input

/// Extension point for non-text inputs (speech, image, video): turns the
/// bytes of the --input file into text that then goes through the pipeline.
class ModalPreprocessor {
 public:
  virtual ~ModalPreprocessor() = default;
  virtual std::string to_text(const std::vector<unsigned char>& bytes) = 0;
};

/// Modal name -> pre-processor. "string" and "text" are built in.
using ModalRegistry = std::map<std::string, std::shared_ptr<ModalPreprocessor>>;

/// The `factcheck` command line:
///
///   factcheck --modal string --input "text" --api_config cfg.yaml [--language en] [--output report.json]
///   factcheck --modal text --input doc.txt --api_config cfg.yaml
///   factcheck serve --api_config cfg.yaml [--host H] [--port P]
///   factcheck eval --dataset claims.jsonl --format factool_qa [--mode mock|live] [--api_config cfg.yaml]
///   factcheck eval --dataset claims.jsonl --format factool_qa --baseline always_true
///
/// The report (or the metrics) is written as JSON to --output, or to `out`
/// when --output is absent or "-". Diagnostics go to `err`.
/// A modal that is neither built in nor in `modals` is a usage error;
/// speech, image and video are named as unimplemented extensions.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
             const ModalRegistry& modals = {});

}  // namespace factcheck::service
