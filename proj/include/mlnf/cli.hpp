#ifndef MLNF_CLI_HPP_
#define MLNF_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace mlnf {

/// Entry point of the `mlnf` tool. Returns 0 on success, 2 on a usage error and 1 on
/// any other failure; messages go to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace mlnf

#endif  // MLNF_CLI_HPP_
