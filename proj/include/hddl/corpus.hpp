#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hddl/parser.hpp"
#include "hddl/validator.hpp"

// Test corpus manifest. One entry per line, tab-separated:
//
//   id  kind  path  expectation  context  provenance
//
// kind is domain, problem, plan or snippet. expectation is one of parses,
// check-passes, check-fails(code,...), valid, invalid(kind). context is '-'
// or a ';'-separated list of key=value pairs:
//   domain=<id> problem=<id>   companions for problems and plans
//   entry=structures|problem-sections   how a snippet is parsed
//   gates=<flag>,...   flags whose removal must trigger a gate violation
//   mode=sum|max   method duration mode for plans
namespace hddl {

struct CorpusEntry {
  std::string id;
  std::string kind;
  std::string path;  // relative to the manifest's directory
  std::string expectation;
  std::vector<std::string> codes;  // argument list of the expectation
  std::map<std::string, std::string> context;
  std::string provenance;
  std::uint32_t line = 0;
};

struct Manifest {
  std::filesystem::path root;
  std::vector<CorpusEntry> entries;

  const CorpusEntry* find(const std::string& id) const;
};

/// Parses manifest text; throws std::runtime_error on malformed lines.
std::vector<CorpusEntry> read_manifest(std::string_view text);

/// Reads <dir>/manifest.tsv.
Manifest corpus_manifest(const std::filesystem::path& dir);

struct EntryResult {
  bool ok = false;
  std::string detail;
};

/// Runs the pipeline stage named by the entry's expectation. Productions
/// reached while parsing are added to `coverage` when given.
EntryResult run_entry(const Manifest& m, const CorpusEntry& e,
                      ProductionCoverage* coverage = nullptr);

std::string read_text_file(const std::filesystem::path& p);

}  // namespace hddl
