#ifndef CM_CLI_HPP
#define CM_CLI_HPP

#include <string>
#include <vector>

namespace cm {

// exit code 0 on success, 1 on domain error, 2 on usage error
int cli_main(const std::vector<std::string>& args);

} // namespace cm

#endif
