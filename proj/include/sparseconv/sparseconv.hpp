#pragma once

#include <sparseconv/baseline.hpp>
#include <sparseconv/bench.hpp>
#include <sparseconv/driver.hpp>
#include <sparseconv/fingerprint.hpp>
#include <sparseconv/fold.hpp>
#include <sparseconv/instances.hpp>
#include <sparseconv/io.hpp>
#include <sparseconv/locate.hpp>
#include <sparseconv/numtheory.hpp>
#include <sparseconv/random.hpp>
#include <sparseconv/sparse_vector.hpp>
