def execute_command(image):
    image_patch = ImagePatch(image)
    containers = image_patch.find('water container')
    for container in containers:
        if container.verify_property('water container', 'blue'):
            return {'function': 'navigate_to_object', 'inputs': (container.horizontal_center, container.vertical_center), 'box': [container.left, container.lower, container.right, container.upper]}
    return {'function': 'None', 'error': 'No blue water container found.'}
