#ifndef FROBSET_TESTS_SUPPORT_HPP
#define FROBSET_TESTS_SUPPORT_HPP

#include <frobset/randcheck.hpp>

namespace testsupport {

using namespace frobset;
using namespace frobset::randcheck;

} // namespace testsupport

#endif
