"""Exception types shared across the package."""


class CurvedNBodyError(Exception):
    """Base class for everything raised deliberately by this package."""


class SingularPair(CurvedNBodyError):
    """Two bodies at (or numerically indistinguishable from) a singularity.

    Collisions on both spaces and antipodal pairs on the sphere make the
    cotangent potential blow up, so distance and force evaluations refuse
    to proceed.  ``i`` and ``j`` carry the offending pair when known.
    """

    def __init__(self, i=None, j=None):
        self.i = i
        self.j = j
        if i is None or j is None:
            msg = "pair inside the collision/antipodal margin"
        else:
            msg = f"singular pair ({i}, {j})"
        super().__init__(msg)


class ProjectionPole(CurvedNBodyError):
    """Stereographic projection evaluated at (or too close to) its pole."""


class DegenerateConfig(CurvedNBodyError):
    """Position matrix has rank <= 1, below the lowest dimension class."""


class NotCoplanar(CurvedNBodyError):
    """No common rapidity: the bodies do not sit on one boosted H2 slice."""


class GaugeDegenerate(CurvedNBodyError):
    """Canonical gauge needs at least one body off the zw-axis."""


class RegionInvalid(CurvedNBodyError):
    """Family parameters lie outside the region giving a positive mass."""


class NoMassSolution(CurvedNBodyError):
    """The polar-mass balance equation has no root in the search bracket."""


class InfeasibleSpin(CurvedNBodyError):
    """Requested spin admits no real rotation rates."""


class ConfigFileError(CurvedNBodyError):
    """A configuration file failed to parse or validate."""
