import random

import matplotlib.pyplot as plt
import numpy as np


def _random_color():
    return "#{:06x}".format(random.randint(0, 0xFFFFFF))


class StaticRailYardPlotter:
    def __init__(self, ax=None, xlabel=r"$\chi$", ylabel=r"$\kappa$"):
        """
        Constructor.

        Parameters
        ----------
        ax: ~matplotlib.axes.Axes
            Matplotlib Axes object. A new figure is created when omitted.
        xlabel, ylabel : str, optional
            Axis labels of a newly created figure.

        """
        self.ax = ax
        if not self.ax:
            self.fig, self.ax = plt.subplots(figsize=(6, 6))
            self.ax.set_xlabel(xlabel)
            self.ax.set_ylabel(ylabel)

    def plot_frozen_boundary(self, boundary, color=None):
        """
        Scatter the points ``(χ(w), κ(w))`` of a frozen boundary.

        Parameters
        ----------
        boundary : ~railyardpy.asymptotics.FrozenBoundary
        color : hex code RGB, optional
            Picks a random color by default.

        """
        if not len(boundary):
            raise ValueError("frozen boundary has no points")
        chi = np.array([p[1] for p in boundary.points])
        kappa = np.array([p[2] for p in boundary.points])
        order = np.argsort(chi)
        self.ax.plot(chi[order], kappa[order], ".", color=color or _random_color())

    def plot_limit_shape(self, chis, kappas, values, cmap="viridis", label="slope"):
        """
        Heat map of a grid of limit-shape values, ``values[i, j]`` at
        ``(chis[i], kappas[j])``.

        """
        chis = np.asarray(chis, dtype=float)
        kappas = np.asarray(kappas, dtype=float)
        values = np.asarray(values, dtype=float)
        if values.shape != (chis.shape[0], kappas.shape[0]):
            raise ValueError(
                "values has shape {}, expected {}".format(values.shape, (chis.shape[0], kappas.shape[0]))
            )
        mesh = self.ax.pcolormesh(chis, kappas, values.T, cmap=cmap, shading="nearest")
        self.colorbar = self.ax.figure.colorbar(mesh, ax=self.ax, label=label)
        return mesh

    def plot_height(self, profile, y_window, color=None, scale=1.0):
        """
        Step plot of a sampled height function along one column.

        Parameters
        ----------
        profile : ~railyardpy.railyard.HeightProfile
        y_window : tuple
            ``(lo, hi)`` in lattice units.
        scale : float, optional
            Multiplies both axes, ``ε`` for rescaled pictures.

        """
        ys, hs = profile.sample(y_window)
        self.ax.step(scale * ys, scale * hs, where="mid", color=color or _random_color())

    def plot_curve(self, xs, ys, style="-", color=None, label=None):
        self.ax.plot(xs, ys, style, color=color or _random_color(), label=label)
        if label is not None:
            self.ax.legend()

    def show(self):
        plt.show()

    def save(self, name="railyard.png"):
        plt.savefig(name)
