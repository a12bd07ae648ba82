#pragma once

#include "besovlab/besov.hpp"
#include "besovlab/dyadic_criterion.hpp"
#include "besovlab/error.hpp"
#include "besovlab/generators.hpp"
#include "besovlab/harness.hpp"
#include "besovlab/io.hpp"
#include "besovlab/lemma.hpp"
#include "besovlab/path.hpp"
#include "besovlab/random.hpp"
#include "besovlab/serialize.hpp"
#include "besovlab/version.hpp"
#include "besovlab/weight.hpp"
