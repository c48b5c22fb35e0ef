"""HTTP front end: pydantic schemas and the FastAPI application."""
