#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hddl {

using FileId = std::uint32_t;

/// Region of a source file. Lines and columns are 1-based; the byte range is
/// half-open [begin, end).
struct SourceSpan {
  FileId file = 0;
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const SourceSpan&) const = default;

  bool contains(const SourceSpan& inner) const {
    return file == inner.file && begin <= inner.begin && inner.end <= end;
  }

  /// Smallest span covering both `a` and `b` (same file assumed).
  static SourceSpan cover(const SourceSpan& a, const SourceSpan& b);
};

/// Position metadata attached to every syntax node. It never takes part in
/// structural comparison, so two trees parsed from differently formatted
/// text compare equal.
struct NodeInfo {
  SourceSpan span;
  /// Original spelling for leaf symbols (names are stored lower-cased).
  std::string spelling;

  friend bool operator==(const NodeInfo&, const NodeInfo&) { return true; }
};

enum class Severity { Error, Warning, Note };

std::string_view to_string(Severity s);

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceSpan span;
  /// Stable machine-readable kind, e.g. "unbound-variable".
  std::string code;
  std::string message;
  /// Grammar production being processed when the problem was found.
  std::string production;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);

/// Registry mapping file ids to display names and contents.
class SourceManager {
 public:
  FileId add(std::string name, std::string text);
  const std::string& name(FileId id) const;
  const std::string& text(FileId id) const;
  std::string_view slice(const SourceSpan& span) const;

 private:
  struct Entry {
    std::string name;
    std::string text;
  };
  std::vector<Entry> files_;
};

/// Renders `file:line:col: severity: message [production]`.
std::string format_diagnostic(const Diagnostic& d, std::string_view file_name);

/// Sorts by file, then byte offset, then code; stable for equal keys.
void sort_diagnostics(Diagnostics& diags);

}  // namespace hddl
