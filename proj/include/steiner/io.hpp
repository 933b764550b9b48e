#pragma once

#include <iosfwd>
#include <string>

#include "steiner/instance.hpp"

namespace steiner {

/// Instance text format, one instance per file:
///   steiner <|V|> <|E|> <|R|>
///   e <u> <v> <p[/q]>        (|E| lines, 0-based vertex indices)
///   terminals <i1> <i2> ...  (|R| indices; the first is the root)
/// Whitespace-delimited; '#' starts a comment.  Parse errors carry the line
/// number.
Instance parse_instance(std::istream& in, const std::string& origin = "<stream>");
Instance load_instance(const std::string& path);
std::string format_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

} // namespace steiner
