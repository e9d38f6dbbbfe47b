"""API routers."""


