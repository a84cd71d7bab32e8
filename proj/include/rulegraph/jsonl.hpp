#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rulegraph/event.hpp"
#include "rulegraph/type_config.hpp"

namespace rulegraph {

/// Non-blank lines of a file; "-" reads standard input.
std::vector<std::string> read_jsonl(const std::filesystem::path& path);
/// Writes one line per entry; "-" writes standard output.
void write_jsonl(const std::filesystem::path& path, const std::vector<std::string>& lines);

/// Flattens every line; an IngestError names the offending line number.
std::vector<EventRecord> parse_events(const std::vector<std::string>& lines, const TypeConfig& types);

/// Ground-truth labels; unlabeled lines count as normal.
std::vector<Label> labels_of(const std::vector<EventRecord>& events);

}  // namespace rulegraph
