#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "screenref/screen_model.hpp"

namespace screenref {

// Line-delimited JSON datasets. One record per line:
//
//   {"request": "...", "kind": "conversational|synthetic|onscreen",
//    "entities": [{"type": "...", "properties": [["k", "v"], ...],
//                  "display_text": "...", "box": [l, t, w, h],
//                  "surrounding": [{"text": "...", "box": [...]}]}],
//    "screen": [{"text": "...", "box": [...]}],
//    "ground_truth": [1, 3]}
//
// Blank lines are skipped. Errors carry the 1-based line number.

std::vector<DataPoint> load_dataset(std::istream& in);
std::vector<DataPoint> load_dataset_file(const std::string& path);

void save_dataset(std::ostream& out, std::span<const DataPoint> points);

/// Single record without trailing newline.
std::string to_json_line(const DataPoint& point);
/// Parses one record; `line` is used only for diagnostics.
DataPoint parse_json_line(std::string_view text, std::size_t line = 0);

}  // namespace screenref
