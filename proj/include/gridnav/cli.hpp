#ifndef GRIDNAV_CLI_HPP
#define GRIDNAV_CLI_HPP

namespace gridnav {

/// Entry point shared by the gridnav binary and the tests.
/// Exit codes: 0 success / goal reached, 1 usage or input error,
/// 2 scenario ended in collision, 3 scenario timed out.
int cli_main(int argc, const char* const* argv);

}  // namespace gridnav

#endif
