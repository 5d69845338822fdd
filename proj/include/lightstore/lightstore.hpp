#ifndef LIGHTSTORE_LIGHTSTORE_HPP
#define LIGHTSTORE_LIGHTSTORE_HPP

#include "lightstore/config.hpp"
#include "lightstore/echoes.hpp"
#include "lightstore/errors.hpp"
#include "lightstore/io.hpp"
#include "lightstore/oracle.hpp"
#include "lightstore/protocol.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/response.hpp"
#include "lightstore/scenario.hpp"
#include "lightstore/slowlight.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"
#include "lightstore/version.hpp"

#endif
