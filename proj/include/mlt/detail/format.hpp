#ifndef MLT_DETAIL_FORMAT_HPP
#define MLT_DETAIL_FORMAT_HPP

#include <sstream>
#include <string>

namespace mlt::detail {

/// Shortest default-stream rendering ("7500", "0.25"); for diagnostics only.
inline std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace mlt::detail

#endif  // MLT_DETAIL_FORMAT_HPP
