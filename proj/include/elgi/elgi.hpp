#ifndef ELGI_ELGI_HPP
#define ELGI_ELGI_HPP

#include "elgi/airy.hpp"
#include "elgi/lp.hpp"
#include "elgi/parallel.hpp"
#include "elgi/parse.hpp"
#include "elgi/scan.hpp"
#include "elgi/semiclassics.hpp"
#include "elgi/shannon_cone.hpp"
#include "elgi/spin.hpp"
#include "elgi/temporal.hpp"
#include "elgi/wigner.hpp"

#endif  // ELGI_ELGI_HPP
