#pragma once

#include <string>
#include <vector>

namespace vecbias {

// One token per line; '#' comments and blank lines allowed.
std::vector<std::string> load_wordlist(const std::string& path);

}  // namespace vecbias
