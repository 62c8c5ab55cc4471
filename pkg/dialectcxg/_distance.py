"""
Utility module for great-circle distances and radius searches on the sphere
"""

# External imports
import numpy as np
from scipy.spatial import cKDTree

# Mean Earth radius (IUGG)
EARTH_RADIUS_KM = 6371.0088


def haversine_km(lat1, lon1, lat2, lon2) -> np.ndarray:
    """Great-circle distance between points on a spherical Earth

    Parameters
    ----------
    lat1, lon1 : float or array_like
        Latitude and longitude of the first point(s) in degrees
    lat2, lon2 : float or array_like
        Latitude and longitude of the second point(s) in degrees

    Returns
    -------
    np.ndarray
        Distances in kilometers, broadcast over the inputs
    """

    lat1, lon1, lat2, lon2 = map(np.radians, (lat1, lon1, lat2, lon2))
    dlat = lat2 - lat1
    dlon = lon2 - lon1

    a = np.sin(dlat / 2) ** 2 + \
        np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2) ** 2

    return 2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0, 1)))


def to_unit_vectors(lat, lon) -> np.ndarray:
    """Convert latitude/longitude pairs to 3D unit vectors

    Parameters
    ----------
    lat, lon : array_like
        Coordinates in degrees

    Returns
    -------
    np.ndarray
        Array of shape (n, 3)
    """

    lat = np.radians(np.atleast_1d(np.asarray(lat, dtype=float)))
    lon = np.radians(np.atleast_1d(np.asarray(lon, dtype=float)))

    return np.column_stack((
        np.cos(lat) * np.cos(lon),
        np.cos(lat) * np.sin(lon),
        np.sin(lat)
    ))


def chord_length(distance_km: float) -> float:
    """Straight-line distance through the unit sphere matching a great-circle
    distance on the Earth's surface

    Parameters
    ----------
    distance_km : float
        Great-circle distance in kilometers

    Returns
    -------
    float
        Chord length on the unit sphere (at most 2)
    """

    angle = min(distance_km / EARTH_RADIUS_KM, np.pi)
    return 2 * np.sin(angle / 2)


class SphericalIndex:
    """Radius and nearest-neighbor queries over a fixed set of points.

    Candidates are pulled from a KD-tree over unit vectors, where chord length
    is monotone in great-circle distance, and then ranked with the haversine
    distance so results match an exhaustive haversine scan.

    Parameters
    ----------
    lat, lon : array_like
        Coordinates of the indexed points in degrees
    """

    def __init__(self, lat, lon):

        self.lat = np.asarray(lat, dtype=float)
        self.lon = np.asarray(lon, dtype=float)
        self._tree = cKDTree(to_unit_vectors(self.lat, self.lon))

    def __len__(self):

        return len(self.lat)

    def within(self, lat: float, lon: float, radius_km: float) -> np.ndarray:
        """Indices of all points whose chord distance could fall within
        the radius, in ascending index order

        Parameters
        ----------
        lat, lon : float
            Query point in degrees
        radius_km : float
            Search radius in kilometers

        Returns
        -------
        np.ndarray
            Candidate indices (a superset of the exact answer)
        """

        # Pad the chord radius slightly so rounding never drops a true hit
        radius = chord_length(radius_km) * (1 + 1e-9) + 1e-12
        hits = self._tree.query_ball_point(to_unit_vectors(lat, lon)[0], radius)

        return np.sort(np.asarray(hits, dtype=int))

    def nearest(self, lat: float, lon: float, radius_km: float):
        """Nearest indexed point within the radius

        Parameters
        ----------
        lat, lon : float
            Query point in degrees
        radius_km : float
            Search radius in kilometers

        Returns
        -------
        int or None
            Index of the nearest point, the smallest index on ties, or None
            when no point lies within the radius
        """

        candidates = self.within(lat, lon, radius_km)
        if len(candidates) == 0:
            return None

        distances = haversine_km(
            lat, lon, self.lat[candidates], self.lon[candidates])
        best = int(np.argmin(distances))
        if distances[best] > radius_km:
            return None

        return int(candidates[best])
