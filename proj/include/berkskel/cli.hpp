#pragma once

// Command-line front end. run_cli takes the arguments after the program name
// and returns the exit code: 0 pass, 1 semantic failure, 2 parse failure or
// unreadable input.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "berkskel/document.hpp"
#include "berkskel/profile.hpp"
#include "berkskel/report.hpp"
#include "berkskel/skeleton.hpp"

namespace berkskel {

namespace cli {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_parse = 2;

// Thrown by load() and inside commands to leave with a given code.
struct Exit {
  int code;
  std::string message;
};

// BERKSKEL_COLOR set to anything but "" or "0".
bool color_enabled();

// Reads and parses a document; unreadable or malformed files exit with 2.
Document load(const std::string& path);

// Validators for every object in the document, with a note per valid one.
Report validate_document(const Document& doc);

/// Every balancing check for one morphism; different data is optional and
/// its absence is itself a failure.
Report balance_report(const Document& doc, const std::string& morphism_name,
                      const std::optional<std::string>& different_name);

/// Point syntax: a vertex id, or edge:from:depth.
SkeletonPoint parse_point(const std::string& text);

/// Rows (location, position, threshold): one per type-2 vertex, and each
/// edge at both ends (the far end of an infinite edge as the limit "inf").
std::string radii_csv(const SkeletonGraph& g, const RadialSet& set, std::optional<unsigned> decimal);

}  // namespace cli

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace berkskel
