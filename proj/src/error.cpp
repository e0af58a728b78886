#include "error.hpp"

namespace dlpkit {

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace dlpkit
