#ifndef DGFEM_CLI_HPP
#define DGFEM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dgfem {

/// The dgsolve driver: mesh -> refine -> parameters -> assemble -> solve ->
/// error/table/export. Returns the process exit code (0 success, 1 solver or
/// I/O failure, 2 usage error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dgfem

#endif
