#pragma once

// Internal helpers for the UTF-8 / JSON Lines files the pipeline reads and writes.

#include <filesystem>
#include <functional>
#include <string>

#include <json.hpp>

#include "qaida/utf8.hpp"

namespace qaida {

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a sibling temporary and renames, so readers never observe a
/// partially written file.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Calls `fn` for every non-blank line parsed as JSON. Parse failures are
/// reported as Error{InvalidArgument} with the line number.
void for_each_json_line(const std::filesystem::path& path, const std::function<void(const nlohmann::ordered_json&)>& fn);

}  // namespace qaida
