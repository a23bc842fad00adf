#ifndef COMMDIFF_EXEC_HPP
#define COMMDIFF_EXEC_HPP

namespace commdiff {

// Batch kernels come in two flavours: a serial reference and an OpenMP
// version. Both must produce bit-identical results; tests compare them and
// the bench tool times them.
enum class Exec { serial, parallel };

}  // namespace commdiff

#endif
