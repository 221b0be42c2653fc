#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace galign::csv {

// RFC 4180 records: comma separated, double-quoted fields may contain
// commas, quotes ("") and line breaks. Accepts LF or CRLF. A trailing empty
// line is not a record. Throws Error(MalformedRow) with the 1-based line of
// an unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view document);

std::string escape(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace galign::csv
