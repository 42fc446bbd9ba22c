#ifndef QMS_QMS_HPP
#define QMS_QMS_HPP

#include "qms/channel.hpp"
#include "qms/dilation.hpp"
#include "qms/json_io.hpp"
#include "qms/lindblad.hpp"
#include "qms/matrix_ops.hpp"
#include "qms/random_gen.hpp"
#include "qms/semigroup.hpp"
#include "qms/spinchain.hpp"
#include "qms/state.hpp"
#include "qms/subspace.hpp"
#include "qms/types.hpp"

#endif
