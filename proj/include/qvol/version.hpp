#ifndef QVOL_VERSION_HPP
#define QVOL_VERSION_HPP

namespace qvol {

inline constexpr const char* kEngineVersion = "0.1.0";

} // namespace qvol

#endif
