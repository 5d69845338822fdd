#ifndef LIGHTSTORE_VERSION_HPP
#define LIGHTSTORE_VERSION_HPP

#define LIGHTSTORE_VERSION "0.1.0"

namespace lightstore {

inline const char* version() { return LIGHTSTORE_VERSION; }

}  // namespace lightstore

#endif
