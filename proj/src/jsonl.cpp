#include "rulegraph/jsonl.hpp"

#include <fstream>
#include <iostream>

#include "rulegraph/detector.hpp"
#include "rulegraph/error.hpp"

namespace rulegraph {

std::vector<std::string> read_jsonl(const std::filesystem::path& path) {
  if (path == "-") return read_lines(std::cin);
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_lines(in);
}

void write_jsonl(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  auto emit = [&](std::ostream& out) {
    for (const auto& l : lines) out << l << '\n';
  };
  if (path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  emit(out);
}

std::vector<EventRecord> parse_events(const std::vector<std::string>& lines, const TypeConfig& types) {
  Flattener fl(types);
  std::vector<EventRecord> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(fl.parse_line(lines[i]));
    } catch (const IngestError& e) {
      throw IngestError("line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Label> labels_of(const std::vector<EventRecord>& events) {
  std::vector<Label> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.label.value_or(Label::kNormal));
  return out;
}

}  // namespace rulegraph
