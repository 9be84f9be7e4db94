#include "vecbias/wordlist.hpp"

#include <fstream>

#include "vecbias/error.hpp"

namespace vecbias {

std::vector<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "cannot open word list '" + path + "'");
  std::vector<std::string> words;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find(' ') != std::string::npos || line.find('\t') != std::string::npos) {
      raise(ErrorCode::parse,
            path + ":" + std::to_string(line_no) + ": token contains whitespace");
    }
    words.push_back(line);
  }
  if (words.empty()) raise(ErrorCode::parse, path + ": no tokens found");
  return words;
}

}  // namespace vecbias
