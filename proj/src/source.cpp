#include "hddl/source.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hddl {

SourceSpan SourceSpan::cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan out = a;
  if (b.begin < a.begin) {
    out.begin = b.begin;
    out.start_line = b.start_line;
    out.start_col = b.start_col;
  }
  if (b.end > a.end) {
    out.end = b.end;
    out.end_line = b.end_line;
    out.end_col = b.end_col;
  }
  return out;
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Error:
      return "error";
    case Severity::Warning:
      return "warning";
    case Severity::Note:
      return "note";
  }
  return "error";
}

bool has_errors(const Diagnostics& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

FileId SourceManager::add(std::string name, std::string text) {
  files_.push_back({std::move(name), std::move(text)});
  return static_cast<FileId>(files_.size() - 1);
}

const std::string& SourceManager::name(FileId id) const {
  if (id >= files_.size()) throw std::out_of_range("unknown file id");
  return files_[id].name;
}

const std::string& SourceManager::text(FileId id) const {
  if (id >= files_.size()) throw std::out_of_range("unknown file id");
  return files_[id].text;
}

std::string_view SourceManager::slice(const SourceSpan& span) const {
  const std::string& t = text(span.file);
  if (span.begin > t.size() || span.end > t.size() || span.begin > span.end) return {};
  return std::string_view(t).substr(span.begin, span.end - span.begin);
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file_name) {
  std::ostringstream os;
  os << file_name << ':' << d.span.start_line << ':' << d.span.start_col << ": "
     << to_string(d.severity) << ": " << d.message;
  if (!d.production.empty()) os << " [" << d.production << ']';
  return os.str();
}

void sort_diagnostics(Diagnostics& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.file != b.span.file) return a.span.file < b.span.file;
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    return a.code < b.code;
  });
}

}  // namespace hddl
