#pragma once

#include <string>
#include <string_view>

namespace treasure {

// Porter suffix-stripping stemmer (the classic algorithm as maintained in its
// reference implementation: words of length <= 2 are left untouched, step 2
// uses the bli->ble and logi->log rules).
//
// Expects a lower-case token; characters outside a-z are treated as consonants
// and simply carried through.
std::string porter_stem(std::string_view word);

}  // namespace treasure
