#pragma once

#include "wernerprep/error.hpp"
#include "wernerprep/matcore.hpp"
#include "wernerprep/werner.hpp"
#include "wernerprep/channels.hpp"
#include "wernerprep/spectral.hpp"
#include "wernerprep/constructions.hpp"
#include "wernerprep/groups.hpp"
#include "wernerprep/optimize.hpp"
#include "wernerprep/io.hpp"
