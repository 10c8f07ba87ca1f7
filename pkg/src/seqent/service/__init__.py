"""HTTP face of the toolkit: request/response bodies, shared command
handlers, and the FastAPI application factory."""
