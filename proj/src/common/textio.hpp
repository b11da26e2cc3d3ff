#ifndef SSC_COMMON_TEXTIO_HPP
#define SSC_COMMON_TEXTIO_HPP

#include <string>
#include <vector>

namespace ssc {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::vector<std::string> read_lines(const std::string& path);

// strtod-based; throws ParseError naming `what` on garbage.
double parse_double(const std::string& s, const std::string& what);
long parse_long(const std::string& s, const std::string& what);

} // namespace ssc

#endif
