from .server import KinematicsSession, SimSession, create_app, serve

__all__ = ["KinematicsSession", "SimSession", "create_app", "serve"]
