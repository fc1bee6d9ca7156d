import numpy as np
from scipy.spatial.distance import cdist

from .particle import ParticleWorld


def navigation_reward(landmarks, positions, alive, missing_distance):
    ''' Negative sum over landmarks of the distance to the nearest live
    agent. Landmarks count as `missing_distance` away when nobody is alive.
    '''
    landmarks = np.asarray(landmarks, dtype=float)
    live = np.asarray(positions, dtype=float)[np.asarray(alive, dtype=bool)]
    if len(live) == 0:
        return -missing_distance * len(landmarks)
    return -float(np.sum(cdist(landmarks, live).min(axis=1)))


class HazardousNavigation(ParticleWorld):
    ''' Cover every landmark with a separate agent; one landmark, unknown
    until an agent comes within the hazard radius, terminates agents with
    probability p_fail per step. With the hazard disabled this is plain
    cooperative navigation.

    The hazardous landmark still has to be covered.
    '''

    def _landmark_count(self):
        if self.config.n_landmarks is None:
            return self.config.n_agents
        return self.config.n_landmarks

    def _place_landmarks(self, rng):
        hw = self.config.world_halfwidth
        return rng.uniform(-hw, hw, size=(self.n_landmarks, 2))

    def _place_hazard(self, rng, landmarks):
        index = rng.integers(self.n_landmarks)
        if not self.config.hazard:
            return np.zeros(2)
        return np.array(landmarks[index])

    def reward(self, state):
        view = self.unpack(state.nonhealth)
        return navigation_reward(view.landmarks, view.positions, state.health.values > 0.0,
                                 missing_distance=2.0 * np.sqrt(2.0) * self.config.world_halfwidth)
